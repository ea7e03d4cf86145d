#include "modcurv/divdiff.hpp"

#include <algorithm>

namespace modcurv {

namespace {

RationalExpr half_m() { return rm() / RationalExpr(2); }

// Rising factorial (x)_n for an exact scalar x.
RationalExpr rising(const RationalExpr& x, int n) {
  RationalExpr r(1);
  for (int i = 0; i < n; ++i) r *= x + RationalExpr(i);
  return r;
}

Q factorial(int n) {
  Q f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Var arg_var(Arg a) {
  switch (a) {
    case Arg::z1: return Var::z1;
    case Arg::z2: return Var::z2;
    default: return Var::z;
  }
}

Arg node_arg(Node n) {
  switch (n) {
    case Node::z1: return Arg::z1;
    case Node::z2: return Arg::z2;
    case Node::w: return Arg::w;
    default: return Arg::z;
  }
}

// Derivative of the bare atom with respect to its own argument.
SpectralExpr atom_derivative_in_arg(const Atom& a) {
  const RationalExpr x = arg_value(a.arg);
  switch (a.kind) {
    case Atom::Kind::H1: return SpectralExpr::term(RationalExpr(a.b), Atom::h1(a.a, a.b + 1, a.arg));
    case Atom::Kind::G: {
      // G = (H02 - gamma)/x  =>  G' = (2x H03 - H02 + gamma)/x^2
      const RationalExpr x2 = x * x;
      SpectralExpr r = SpectralExpr::term(RationalExpr(2) / x, Atom::h1(0, 3, a.arg));
      r.add(RationalExpr(-1) / x2, Atom::h1(0, 2, a.arg));
      r.add(RationalExpr(1) / x2, Atom::gamma());
      return r;
    }
    default: throw UnknownAtomDerivative("no derivative rule for atom " + a.str());
  }
}

}  // namespace

SpectralExpr partial(const SpectralExpr& e, Var v) {
  if (v == Var::m) throw std::invalid_argument("partial: derivative in m is not supported");
  static const Var tvars[3] = {Var::z, Var::z1, Var::z2};
  SpectralExpr r;
  for (const auto& [k, c] : e.terms()) {
    const Atom& a = k.atom;
    // coefficient
    r.add(c.derivative(v), a, k.power);
    // T(u)^n factors: d/dv = n (m/2) u'/(1-u)
    for (int i = 0; i < 3; ++i) {
      if (!k.power.k[i]) continue;
      const RationalExpr u = RationalExpr::var(tvars[i]);
      const RationalExpr du = u.derivative(v);
      if (du.is_zero()) continue;
      r.add(c * RationalExpr(k.power.k[i]) * half_m() * du / (RationalExpr(1) - u), a, k.power);
    }
    switch (a.kind) {
      case Atom::Kind::Unit:
      case Atom::Kind::Gamma: break;
      case Atom::Kind::H1:
      case Atom::Kind::G: {
        const RationalExpr dx = arg_value(a.arg).derivative(v);
        if (dx.is_zero()) break;
        r += (c * dx * atom_derivative_in_arg(a)).times_power(k.power);
        break;
      }
      case Atom::Kind::H2:
        if (v == Var::z1) r.add(c * RationalExpr(a.b), Atom::h2(a.a, a.b + 1, a.c), k.power);
        if (v == Var::z2) r.add(c * RationalExpr(a.c), Atom::h2(a.a, a.b, a.c + 1), k.power);
        break;
      case Atom::Kind::DD: {
        // d/dv f[..., s, ...] = sum over node symbols s of s'(v) * count(s) * f[..., s, s, ...]
        NodeList distinct = a.nodes;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (Node s : distinct) {
          const RationalExpr ds = node_value(s).derivative(v);
          if (ds.is_zero()) continue;
          const long cnt = std::count(a.nodes.begin(), a.nodes.end(), s);
          NodeList nn = a.nodes;
          nn.push_back(s);
          r.add(c * ds * RationalExpr(cnt), Atom::dd(*a.body, nn), k.power);
        }
        break;
      }
    }
  }
  return r;
}

SpectralExpr derive(const SpectralExpr& e) { return partial(e, Var::z); }

RationalExpr taylor_coefficient_at_zero(const SpectralExpr& body_in, int k) {
  const SpectralExpr body = expand_dd(body_in);
  if (!body.is_one_var()) throw std::invalid_argument("taylor_coefficient_at_zero: body must be one-variable in z");
  RationalExpr total;
  for (const auto& [key, c] : body.terms()) {
    // coefficient series c_i, T-power series t_i, atom series a_i; convolve to order k
    std::vector<RationalExpr> cs(k + 1), ts(k + 1), as(k + 1);
    RationalExpr d = c;
    for (int i = 0; i <= k; ++i) {
      cs[i] = d.specialize(Var::z, 0) / RationalExpr(factorial(i));
      if (i < k) d = d.derivative(Var::z);
    }
    const int n = key.power.k[0];
    for (int i = 0; i <= k; ++i) ts[i] = rising(RationalExpr(n) * half_m(), i) / RationalExpr(factorial(i));
    const Atom& a = key.atom;
    for (int i = 0; i <= k; ++i) {
      switch (a.kind) {
        case Atom::Kind::Unit: as[i] = RationalExpr(i == 0 ? 1 : 0); break;
        case Atom::Kind::Gamma: as[i] = i == 0 ? RationalExpr::gamma() : RationalExpr(0); break;
        case Atom::Kind::H1:
          as[i] = rising(RationalExpr(a.b), i) / RationalExpr(factorial(i)) * gamma_ratio(a.a + a.b + i);
          break;
        case Atom::Kind::G:
          // G(z) = sum_i h_{i+1} z^i with H02 = sum_n h_n z^n
          as[i] = rising(RationalExpr(2), i + 1) / RationalExpr(factorial(i + 1)) * gamma_ratio(i + 3);
          break;
        default: throw std::invalid_argument("taylor_coefficient_at_zero: unsupported atom " + a.str());
      }
    }
    for (int i = 0; i <= k; ++i)
      for (int j = 0; i + j <= k; ++j) {
        if (cs[i].is_zero() || ts[j].is_zero() || as[k - i - j].is_zero()) continue;
        total += cs[i] * ts[j] * as[k - i - j];
      }
  }
  return total;
}

SpectralExpr evaluate_at_node(const SpectralExpr& body, Node n) {
  if (n == Node::zero) return SpectralExpr(taylor_coefficient_at_zero(body, 0));
  return rebase(expand_dd(body), node_arg(n));
}

namespace {

class DividedDifference {
 public:
  explicit DividedDifference(const SpectralExpr& body) : body_(body) {
    if (!body_.is_one_var()) throw std::invalid_argument("divided_difference: body must be one-variable in z");
    derivs_.push_back(body_);
  }

  SpectralExpr operator()(NodeList s) {
    std::sort(s.begin(), s.end());
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
    SpectralExpr r;
    if (s.front() == s.back()) {
      r = confluent(s.front(), static_cast<int>(s.size()) - 1);
    } else {
      const Node xi = s.front(), xj = s.back();
      NodeList drop_j = s, drop_i = s;
      drop_j.pop_back();
      drop_i.erase(drop_i.begin());
      const RationalExpr den = node_value(xi) - node_value(xj);
      r = (RationalExpr(1) / den) * ((*this)(drop_j) - (*this)(drop_i));
    }
    memo_.emplace(std::move(s), r);
    return r;
  }

 private:
  // f^(k)(x)/k!
  SpectralExpr confluent(Node x, int k) {
    if (x == Node::zero) return SpectralExpr(taylor_coefficient_at_zero(body_, k));
    while (static_cast<int>(derivs_.size()) <= k) derivs_.push_back(derive(derivs_.back()));
    return (RationalExpr(1) / RationalExpr(factorial(k))) * rebase(derivs_[k], node_arg(x));
  }

  SpectralExpr body_;
  std::vector<SpectralExpr> derivs_;
  std::map<NodeList, SpectralExpr> memo_;
};

}  // namespace

SpectralExpr divided_difference(const SpectralExpr& body, const NodeList& nodes) {
  if (nodes.empty()) throw std::invalid_argument("divided_difference: empty node list");
  DividedDifference dd(expand_dd(body));
  return dd(nodes);
}

SpectralExpr leibniz_split(const SpectralExpr& f, const SpectralExpr& g, const NodeList& nodes) {
  if (nodes.size() != 2) throw std::invalid_argument("leibniz_split: exactly two nodes are supported");
  return evaluate_at_node(f, nodes[0]) * divided_difference(g, nodes) +
         divided_difference(f, nodes) * evaluate_at_node(g, nodes[1]);
}

SpectralExpr expand_dd(const SpectralExpr& e) {
  bool any = false;
  for (const auto& [k, c] : e.terms())
    if (k.atom.kind == Atom::Kind::DD) any = true;
  if (!any) return e;
  SpectralExpr r;
  for (const auto& [k, c] : e.terms()) {
    if (k.atom.kind != Atom::Kind::DD) {
      r.add(c, k.atom, k.power);
      continue;
    }
    r += (c * divided_difference(*k.atom.body, k.atom.nodes)).times_power(k.power);
  }
  return r;
}

}  // namespace modcurv
