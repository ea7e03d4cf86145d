#pragma once
// Divided differences of one-variable spectral expressions and the derivation
// on the atom basis.

#include <vector>

#include "modcurv/expr.hpp"

namespace modcurv {

using NodeList = std::vector<Node>;

// Partial derivative in z, z1 or z2. Chain rule covers atoms at w.
SpectralExpr partial(const SpectralExpr& e, Var v);
// d/dz of a one-variable expression.
SpectralExpr derive(const SpectralExpr& e);

// Value of a one-variable body at a node; node 0 goes through the Taylor series.
SpectralExpr evaluate_at_node(const SpectralExpr& body, Node n);
// k-th Taylor coefficient at z = 0 as an exact scalar (may carry gamma).
RationalExpr taylor_coefficient_at_zero(const SpectralExpr& body, int k);

// body[nodes]; repeated nodes use derivatives.
SpectralExpr divided_difference(const SpectralExpr& body, const NodeList& nodes);
// f(x0) g[x0,x1] + f[x0,x1] g(x1); one of f, g must be free of transcendental atoms.
SpectralExpr leibniz_split(const SpectralExpr& f, const SpectralExpr& g, const NodeList& nodes);
// Replace every opaque DD atom by its expansion.
SpectralExpr expand_dd(const SpectralExpr& e);

}  // namespace modcurv
