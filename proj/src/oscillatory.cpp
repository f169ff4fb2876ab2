#include "fracground/detail/oscillatory.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracground::detail {

double wynn_epsilon(const std::vector<double>& s) {
    const std::size_t n = s.size();
    if (n == 0) return 0.0;
    if (n < 3) return s.back();
    // e[k] holds column k of the epsilon table; only even columns are estimates.
    std::vector<double> prev(n + 1, 0.0), cur(s.begin(), s.end()), next;
    double best = s.back();
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t col = 1; cur.size() > 1; ++col) {
        next.assign(cur.size() - 1, 0.0);
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            const double d = cur[i + 1] - cur[i];
            const double base = col == 1 ? 0.0 : prev[i + 1];
            next[i] = d == 0.0 ? std::numeric_limits<double>::infinity() : base + 1.0 / d;
        }
        if (col % 2 == 0 && next.size() >= 2) {
            const double a = next[next.size() - 1];
            const double b = next[next.size() - 2];
            if (std::isfinite(a) && std::isfinite(b)) {
                const double err = std::abs(a - b);
                if (err < best_err) {
                    best_err = err;
                    best = a;
                }
            }
        }
        prev = std::move(cur);
        cur = std::move(next);
        bool finite = false;
        for (double v : cur) finite = finite || std::isfinite(v);
        if (!finite) break;
    }
    return best;
}

double integrate_finite(const std::function<double(double)>& f, double a, double b, double tol) {
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 15, tol, &err);
    if (std::isfinite(v) && err <= 1e3 * tol * std::max(1.0, std::abs(v))) return v;
    // Endpoint cusps such as t^{2s} near 0 defeat Gauss-Kronrod; tanh-sinh clusters nodes there.
    static thread_local boost::math::quadrature::tanh_sinh<double> ts;
    v = ts.integrate([&](double t) { return f(t); }, a, b, std::max(tol, 1e-15), &err);
    if (!std::isfinite(v)) throw std::runtime_error("quadrature produced a non-finite value");
    if (err > 1e3 * tol * std::max(1.0, std::abs(v)))
        throw std::runtime_error("quadrature failed to converge");
    return v;
}

double integrate_oscillatory_tail(const std::function<double(double)>& f, double a, double first_break,
                                  double period, double tol, int max_intervals) {
    std::vector<double> sums;
    double total = 0.0;
    double lo = a;
    double hi = first_break > a ? first_break : a + period;
    double last_est = std::numeric_limits<double>::quiet_NaN();
    int stable = 0;
    for (int k = 0; k < max_intervals; ++k) {
        total += integrate_finite(f, lo, hi, 1e-3 * tol);
        sums.push_back(total);
        lo = hi;
        hi += period;
        if (sums.size() >= 8) {
            const double est = wynn_epsilon(sums);
            if (std::abs(est - last_est) <= tol * std::max(1e-300, std::abs(est))) {
                if (++stable >= 3) return est;
            } else {
                stable = 0;
            }
            last_est = est;
        }
    }
    if (std::isfinite(last_est)) return last_est;
    throw std::runtime_error("oscillatory tail did not converge");
}

}  // namespace fracground::detail
