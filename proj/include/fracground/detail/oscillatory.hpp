// Quadrature helpers for slowly decaying oscillatory integrands.
#pragma once

#include <functional>
#include <vector>

namespace fracground::detail {

/// Limit estimate of a sequence of partial sums by Wynn's epsilon algorithm.
double wynn_epsilon(const std::vector<double>& partial_sums);

/// Adaptive Gauss-Kronrod on a finite interval; throws on failure to reach tol.
double integrate_finite(const std::function<double(double)>& f, double a, double b, double tol);

/// int_a^inf f, summed over consecutive intervals [a_k, a_{k+1}] of length
/// `period` (ideally between sign changes), accelerated by Wynn epsilon.
/// `first_break` lets the first interval end at a zero of the integrand.
double integrate_oscillatory_tail(const std::function<double(double)>& f, double a, double first_break,
                                  double period, double tol, int max_intervals = 400);

}  // namespace fracground::detail
