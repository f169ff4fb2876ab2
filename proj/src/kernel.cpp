#include "fracground/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "fracground/detail/fft.hpp"
#include "fracground/detail/oscillatory.hpp"

namespace fracground {

std::string to_string(KernelMethod m) { return m == KernelMethod::Quadrature1D ? "quadrature_1d" : "grid_fft"; }

KernelProfile kernel_profile_quadrature(double s, const std::vector<double>& radii, double tol) {
    FracOrder order(s);
    KernelProfile p;
    p.s = order;
    p.dim = 1;
    p.method = KernelMethod::Quadrature1D;
    constexpr double pi = std::numbers::pi;
    double prev = 0.0;
    for (double r : radii) {
        if (!(r > prev)) throw DomainError("kernel_profile: radii must be positive and increasing");
        prev = r;
        // t = r rho puts the zeros of cos at pi/2 + k pi independently of r.
        auto f = [&](double t) { return std::cos(t) / (1.0 + std::pow(t / r, 2.0 * s)); };
        double v;
        try {
            v = detail::integrate_oscillatory_tail(f, 0.0, 0.5 * pi, pi, tol, 4000);
        } catch (const std::exception& e) {
            throw std::runtime_error("kernel quadrature failed at r = " + std::to_string(r) + ": " + e.what());
        }
        p.radii.push_back(r);
        p.values.push_back(v / (pi * r));
    }
    return p;
}

RealField kernel_field(const BoxGrid& grid, double s) {
    RealField delta(grid);
    std::array<int, 3> c{0, 0, 0};
    for (int a = 0; a < grid.dim; ++a) c[a] = grid.points_per_axis / 2;
    delta[grid.flatten(c)] = 1.0 / grid.cell_volume();
    return convolve_kernel(delta, s);
}

KernelProfile kernel_profile_grid(const BoxGrid& grid, double s, double r_max) {
    const RealField K = kernel_field(grid, s);
    const int M = grid.points_per_axis;
    const double h = grid.spacing();
    std::map<long, std::pair<double, std::pair<double, int>>> shells;  // r2 -> (sum, (sumsq, count))
    for (std::size_t i = 0; i < K.size(); ++i) {
        const auto j = grid.unflatten(i);
        long r2 = 0;
        for (int a = 0; a < grid.dim; ++a) r2 += long(j[a] - M / 2) * (j[a] - M / 2);
        if (r2 == 0 || std::sqrt(double(r2)) * h > r_max) continue;
        auto& e = shells[r2];
        e.first += K[i];
        e.second.first += K[i] * K[i];
        e.second.second += 1;
    }
    KernelProfile p;
    p.s = s;
    p.dim = grid.dim;
    p.method = KernelMethod::GridFFT;
    for (const auto& [r2, e] : shells) {
        const double mean = e.first / e.second.second;
        const double var = std::max(0.0, e.second.first / e.second.second - mean * mean);
        p.radii.push_back(std::sqrt(double(r2)) * h);
        p.values.push_back(mean);
        p.shell_spread.push_back(std::sqrt(var) / std::abs(mean));
    }
    return p;
}

KernelProfile kernel_profile(int N, double s, const BoxGrid& grid, const std::vector<double>& radii) {
    if (N < 1 || N > 3) throw DomainError("kernel_profile: N must be 1, 2 or 3");
    if (N == 1 && !radii.empty()) return kernel_profile_quadrature(s, radii);
    if (grid.dim != N) throw DomainError("kernel_profile: grid dimension mismatch");
    return kernel_profile_grid(grid, s, radii.empty() ? 0.5 * grid.half_width : radii.back());
}

double profile_at(const KernelProfile& p, double r) {
    const auto& R = p.radii;
    if (R.empty() || r < R.front() || r > R.back()) throw DomainError("profile_at: radius outside the profile");
    auto it = std::lower_bound(R.begin(), R.end(), r);
    std::size_t k = static_cast<std::size_t>(it - R.begin());
    if (k == 0) return p.values[0];
    const double t = std::log(r / R[k - 1]) / std::log(R[k] / R[k - 1]);
    return std::exp((1.0 - t) * std::log(p.values[k - 1]) + t * std::log(p.values[k]));
}

KernelDecayReport kernel_decay_report(const KernelProfile& p, double fit_lo, double fit_hi) {
    const auto& r = p.radii;
    const auto& K = p.values;
    if (r.size() < 4 || r.front() > 0.1 * (1.0 + 1e-9) || r.back() < 8.0)
        throw DomainError("kernel_decay_report: profile must cover [0.1, 8]");
    const int N = p.dim;
    const double s = p.s;
    KernelDecayReport rep;
    rep.expected_exponent = -(N + 2.0 * s);
    rep.fit_lo = fit_lo;
    rep.fit_hi = fit_hi;
    rep.positive = std::all_of(K.begin(), K.end(), [](double v) { return v > 0.0; });
    rep.non_increasing = true;
    for (std::size_t i = 1; i < K.size(); ++i)
        if (K[i] > K[i - 1] * (1.0 + 1e-8) + 1e-14) rep.non_increasing = false;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] >= 1.0) rep.far_sup = std::max(rep.far_sup, std::pow(r[i], N + 2.0 * s) * K[i]);
        if (r[i] <= 1.0) rep.near_sup = std::max(rep.near_sup, std::pow(r[i], N - 2.0 * s) * K[i]);
        if (i > 0 && r[i - 1] >= 1.0) {
            const double d = std::abs(K[i] - K[i - 1]) / (r[i] - r[i - 1]);
            const double rm = 0.5 * (r[i] + r[i - 1]);
            rep.gradient_sup = std::max(rep.gradient_sup, d * std::pow(rm, N + 1.0 + 2.0 * s));
        }
        if (r[i] >= fit_lo && r[i] <= fit_hi && K[i] > 0.0) {
            const double x = std::log(r[i]), y = std::log(K[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
    }
    if (n < 3) throw DomainError("kernel_decay_report: fewer than 3 radii in the fit window");
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i] >= fit_lo && r[i] <= fit_hi && K[i] > 0.0) {
            const double e = std::log(K[i]) - icpt - slope * std::log(r[i]);
            ss += e * e;
        }
    rep.tail_exponent = slope;
    rep.tail_rms = std::sqrt(ss / n);
    return rep;
}

LqStability kernel_lq_stability(const BoxGrid& grid, double s, double q, double R) {
    if (2.0 * R > grid.half_width) throw DomainError("kernel_lq_stability: need 2R <= L");
    const RealField K = kernel_field(grid, s);
    LqStability out;
    out.q = q;
    out.radius = R;
    const int N = grid.dim;
    out.in_window = q >= 1.0 && (N <= 2.0 * s || q < N / (N - 2.0 * s));
    for (std::size_t i = 0; i < K.size(); ++i) {
        const Point x = grid.point(i);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        const double v = std::pow(std::abs(K[i]), q);
        if (r < R) out.value += v;
        if (r < 2.0 * R) out.value_doubled += v;
    }
    out.value *= grid.cell_volume();
    out.value_doubled *= grid.cell_volume();
    out.relative_change = std::abs(out.value_doubled - out.value) / out.value;
    return out;
}

RealField convolve_kernel(const RealField& u, FracOrder s) {
    return detail::apply_symbol(u, *detail::half_resolvent_symbol(u.grid, s));
}

}  // namespace fracground
