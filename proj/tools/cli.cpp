#include "cli.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "modcurv/geometry.hpp"
#include "modcurv/laws.hpp"
#include "modcurv/matrixmodel.hpp"
#include "modcurv/numeric.hpp"

namespace modcurv::cli {

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v, int digits = 17) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

// "symbolic" or an exact rational such as 3, 5/2
MMode parse_mode(const std::string& s) {
  if (s == "symbolic") return MMode::symbolic();
  try {
    Q q(s);
    q.canonicalize();
    if (q <= 0) throw UsageError("--m must be positive: " + s);
    return MMode::fixed(q);
  } catch (const std::invalid_argument&) {
    throw UsageError("--m expects 'symbolic' or a rational such as 3 or 5/2, got '" + s + "'");
  }
}

struct Flags {
  std::string m;
  int grid = 0;
  double tol = 0;
  unsigned long seed = 1;
  std::string format = "json";
  std::string out;
  bool timing = false;
  unsigned jobs = 0;
  // matrix model
  int trials = 20;
  std::vector<int> sizes{2, 3, 4, 5, 6, 7, 8};
  // eval-h
  std::optional<int> a, b, c;
  std::optional<double> z, z1, z2;
  int digits = 8;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--format", f.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  sub->add_option("--out", f.out, "write the report to this path instead of stdout");
  sub->add_flag("--timing", f.timing, "include wall times (breaks byte-identical output)");
}

using Job = std::function<VerificationReport()>;

std::vector<VerificationReport> run_jobs(const std::vector<Job>& jobs, unsigned workers) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<VerificationReport> out(jobs.size());
  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs.size());
  auto worker = [&] {
    for (size_t i; (i = next++) < jobs.size();) {
      try {
        out[i] = jobs[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < std::min<size_t>(workers, jobs.size()); ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (size_t i = 0; i < jobs.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      out[i].relation = "job-" + std::to_string(i);
      out[i].status = Status::Failed;
      out[i].residual = std::string("exception: ") + e.what();
    }
  }
  return out;
}

void emit_text(std::ostream& os, const VerificationReport& r, bool timing) {
  os << r.relation << " [" << r.mode << "] " << status_name(r.status);
  if (r.max_error > 0 || r.tolerance > 0) os << " max_error=" << fmt(r.max_error, 6) << " tol=" << fmt(r.tolerance, 3);
  if (timing) os << " t=" << fmt(r.seconds, 4) << "s";
  os << "\n";
  if (r.status == Status::Failed) os << "  residual: " << r.residual << "\n";
  for (const auto& [k, v] : r.details) os << "  " << k << ": " << v << "\n";
}

int emit(const std::string& command, const std::vector<VerificationReport>& reps, const Flags& f, std::ostream& out,
         std::ostream& err) {
  bool ok = true;
  for (const auto& r : reps) {
    if (r.passed()) continue;
    ok = false;
    err << "FAILED " << r.relation << ": residual " << r.residual.substr(0, 400);
    if (r.max_error > 0) err << " (max numeric error " << fmt(r.max_error, 6) << ")";
    err << "\n";
  }

  std::ostringstream body;
  if (f.format == "text") {
    for (const auto& r : reps) emit_text(body, r, f.timing);
    body << (ok ? "PASS" : "FAIL") << "\n";
  } else {
    json j;
    j["schema"] = kSchema;
    j["command"] = command;
    j["passed"] = ok;
    j["reports"] = json::array();
    for (const auto& r : reps) j["reports"].push_back(to_json(r, f.timing));
    body << j.dump(2) << "\n";
  }

  if (f.out.empty()) {
    out << body.str();
  } else {
    std::ofstream os(f.out, std::ios::binary);
    if (!os) {
      err << "cannot write " << f.out << "\n";
      return kUsage;
    }
    os << body.str();
  }
  return ok ? kPass : kFailed;
}

std::vector<double> cm_h_masses(const Flags& f) {
  if (f.m.empty() || f.m == "symbolic") return {2, 3, 4, 6};
  return {parse_mode(f.m).value->get_d()};
}

VerificationReport matrix_model(const Flags& f) {
  MatrixModelConfig cfg;
  cfg.sizes = f.sizes;
  cfg.trials = f.trials;
  cfg.seed = f.seed;
  if (f.tol > 0) cfg.tol = f.tol;
  return verify_matrix_model(cfg);
}

VerificationReport operators(const Flags& f) {
  LawConfig cfg;
  cfg.seed = f.seed;
  if (f.tol > 0) cfg.tol = f.tol;
  return verify_operator_laws(cfg);
}

std::vector<Job> jobs_for(const std::string& cmd, const Flags& f) {
  const auto mode_or = [&](MMode dflt) { return f.m.empty() ? dflt : parse_mode(f.m); };
  if (cmd == "verify-t-k") {
    const MMode m = mode_or(MMode::symbolic());
    return {[m] { return verify_T_vs_K(m); }};
  }
  if (cmd == "verify-cm-k") {
    const MMode m = mode_or(MMode::symbolic());
    return {[m] { return verify_H_vs_K(m); }};
  }
  if (cmd == "verify-cm-h") {
    const auto ms = cm_h_masses(f);
    const int grid = f.grid > 0 ? f.grid : 7;
    const double tol = f.tol > 0 ? f.tol : 1e-8;
    return {[ms, grid, tol] { return verify_cm_h(ms, grid, tol); }};
  }
  if (cmd == "verify-ops") {
    if (!f.m.empty() && !parse_mode(f.m).is_m2()) throw UsageError("verify-ops is defined at m = 2 only");
    return {[] { return verify_OPS(); }};
  }
  if (cmd == "verify-gauss-bonnet") {
    const int grid = f.grid > 0 ? f.grid : 20;
    return {[grid] { return verify_gauss_bonnet(grid); }};
  }
  if (cmd == "verify-operators") return {[f] { return operators(f); }};
  if (cmd == "verify-matrix-model") return {[f] { return matrix_model(f); }};
  if (cmd == "verify-all") {
    return {
        [] { return verify_T_vs_K(MMode::symbolic()); },
        [] { return verify_T_vs_K(MMode::fixed(2)); },
        [] { return verify_H_vs_K(MMode::symbolic()); },
        [] { return verify_H_vs_K(MMode::fixed(2)); },
        [] { return verify_OPS(); },
        [] { return verify_gauss_bonnet(20); },
        [] { return verify_cm_h(); },
        [f] { return operators(f); },
        [f] { return matrix_model(f); },
    };
  }
  return {};
}

int eval_h(const Flags& f, std::ostream& out) {
  if (!f.a || !f.b) throw UsageError("eval-h needs --a and --b");
  if (f.m.empty() || f.m == "symbolic") throw UsageError("eval-h needs a numeric --m");
  const double m = parse_mode(f.m).value->get_d();
  double v;
  json j;
  if (f.c) {
    if (!f.z1 || !f.z2) throw UsageError("eval-h with --c needs --z1 and --z2");
    v = eval_H2(*f.a, *f.b, *f.c, *f.z1, *f.z2, m);
    j = {{"a", *f.a}, {"b", *f.b}, {"c", *f.c}, {"z1", *f.z1}, {"z2", *f.z2}};
  } else {
    if (!f.z) throw UsageError("eval-h needs --z");
    v = eval_H1(*f.a, *f.b, *f.z, m);
    j = {{"a", *f.a}, {"b", *f.b}, {"z", *f.z}};
  }
  if (f.format == "text") {
    out << std::setprecision(f.digits) << v << "\n";
  } else {
    j["schema"] = kSchema;
    j["m"] = f.m;
    j["value"] = v;
    out << j.dump(2) << "\n";
  }
  return kPass;
}

int tables(const Flags& f, std::ostream& out, std::ostream& err) {
  std::vector<double> ms{2, 3, 4, 5};
  if (!f.m.empty() && f.m != "symbolic") ms = {parse_mode(f.m).value->get_d()};
  std::vector<SampleRow> rows;
  const std::vector<double> zs{-3.0, -0.9, -0.4, 0.0, 0.3, 0.6, 0.9};
  for (double m : ms) {
    for (int a = 0; a <= 4; ++a)
      for (int b = 1; a + b <= 5; ++b)
        for (double z : zs) {
          const PathValues p = eval_H1_paths(a, b, z, m);
          rows.push_back({"H" + std::to_string(a) + std::to_string(b), z, 0, m, p.value, p.path, p.discrepancy});
        }
    for (int a = 1; a <= 2; ++a)
      for (int b = 1; b <= 2; ++b)
        for (int c = 1; a + b + c <= 5; ++c)
          for (auto [z1, z2] : std::vector<std::pair<double, double>>{{0.2, 0.5}, {-0.7, 0.4}, {0.3, 0.3000001}}) {
            const double dd = eval_H2_divdiff(a, b, c, z1, z2, m);
            const double q = eval_H2_quad(a, b, c, z1, z2, m);
            rows.push_back({"H" + std::to_string(a) + std::to_string(b) + std::to_string(c), z1, z2, m, dd, "divdiff",
                            std::abs(dd - q) / std::max(1.0, std::abs(q))});
          }
  }
  if (f.out.empty()) {
    write_csv(out, rows);
  } else {
    std::ofstream os(f.out, std::ios::binary);
    if (!os) {
      err << "cannot write " << f.out << "\n";
      return kUsage;
    }
    write_csv(os, rows);
  }
  return kPass;
}

}  // namespace

json to_json(const VerificationReport& r, bool timing) {
  json j;
  j["relation"] = r.relation;
  j["mode"] = r.mode;
  j["status"] = status_name(r.status);
  j["residual"] = r.residual;
  j["max_error"] = std::isfinite(r.max_error) ? json(r.max_error) : json(fmt(r.max_error));
  j["tolerance"] = r.tolerance;
  j["trace_length"] = r.trace.size();
  j["trace"] = r.trace;
  json details = json::array();
  for (const auto& [k, v] : r.details) details.push_back({k, v});
  j["details"] = details;
  j["trials"] = r.trials.size();
  if (timing) j["seconds"] = r.seconds;
  return j;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symbolic and numeric verification of modular curvature identities", "modcurv"};
  app.require_subcommand(1, 1);
  Flags f;

  const std::vector<std::pair<std::string, std::string>> verify_cmds{
      {"verify-t-k", "(1 + sigma)T against K"},
      {"verify-cm-k", "two-variable H against K on the y side"},
      {"verify-cm-h", "H against K on the x side, numeric grid"},
      {"verify-ops", "differentiated OPS identity at m = 2"},
      {"verify-gauss-bonnet", "vanishing EH gradient at m = 2"},
      {"verify-operators", "divided-difference, cyclicity and internal-relation laws"},
      {"verify-matrix-model", "operator identities on random finite matrices"},
      {"verify-all", "every check above"},
  };
  for (const auto& [name, desc] : verify_cmds) {
    CLI::App* sub = app.add_subcommand(name, desc);
    add_common(sub, f);
    sub->add_option("--m", f.m, "symbolic or a rational dimension");
    sub->add_option("--grid", f.grid, "grid size (cm-h: per axis; gauss-bonnet: points)");
    sub->add_option("--tol", f.tol, "numeric tolerance");
    sub->add_option("--seed", f.seed, "random seed");
    sub->add_option("--jobs", f.jobs, "worker threads (0 = hardware)");
    if (name == "verify-matrix-model" || name == "verify-all") {
      sub->add_option("--trials", f.trials, "trials per matrix size")->check(CLI::PositiveNumber);
      sub->add_option("--sizes", f.sizes, "matrix sizes")->check(CLI::Range(1, 64));
    }
  }
  CLI::App* evh = app.add_subcommand("eval-h", "evaluate H_{a,b}(z;m) or H_{a,b,c}(z1,z2;m)");
  add_common(evh, f);
  evh->add_option("--m", f.m, "dimension");
  evh->add_option("--a", f.a)->check(CLI::NonNegativeNumber);
  evh->add_option("--b", f.b)->check(CLI::NonNegativeNumber);
  evh->add_option("--c", f.c)->check(CLI::NonNegativeNumber);
  evh->add_option("--z", f.z);
  evh->add_option("--z1", f.z1);
  evh->add_option("--z2", f.z2);
  evh->add_option("--digits", f.digits, "significant digits in text output")->check(CLI::Range(1, 17));

  CLI::App* tab = app.add_subcommand("tables", "CSV sample table of the H-family");
  tab->add_option("--m", f.m, "dimension (default 2, 3, 4, 5)");
  tab->add_option("--out", f.out, "CSV path");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << "run with --help for usage\n";
    return kUsage;
  }
  // eval-h defaults to text; verification commands to json.
  CLI::App* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  if (name == "eval-h" && cmd->count("--format") == 0) f.format = "text";

  try {
    if (name == "eval-h") return eval_h(f, out);
    if (name == "tables") return tables(f, out, err);
    const auto jobs = jobs_for(name, f);
    return emit(name, run_jobs(jobs, f.jobs), f, out, err);
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    err << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace modcurv::cli
