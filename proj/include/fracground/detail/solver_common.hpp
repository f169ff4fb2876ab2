// Helpers shared by the solver translation units.
#pragma once

#include <algorithm>
#include <cmath>

#include "fracground/solver.hpp"

namespace fracground::detail {

/// <a, ((-D)^s + 1) b>.
double h_inner(const RealField& a, const RealField& b, double s);
inline double h_norm(const RealField& a, double s) { return std::sqrt(std::max(0.0, h_inner(a, a, s))); }

/// Relative gradient residual ||r|| / ||u||.
double relative_residual(const RealField& u, const ModelSpec& model, double lambda);

/// Fill energy, Pohozaev, diagnostics, tail mass and the untruncated residual.
void finalize(SolveResult& res, const ModelSpec& model, double lambda);

/// t maximizing t -> I_lambda(t u) for t > 0.
double ray_maximum(const RealField& u, const ModelSpec& model, double lambda);

/// Centered-mass radius int |x| u^2 / int u^2.
double centroid_radius(const RealField& u);

}  // namespace fracground::detail
