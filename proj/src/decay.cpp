#include <algorithm>
#include <cmath>

#include "fracground/detail/solver_common.hpp"
#include "fracground/solver.hpp"

namespace fracground {

DecayFit decay_fit(const RealField& u, double r1, double r2, double s) {
    const BoxGrid& g = u.grid;
    if (!(r1 > 0.0 && r2 > r1)) throw DomainError("decay_fit: need 0 < r1 < r2");
    if (!(r2 < 0.5 * g.half_width)) throw DomainError("decay_fit: window must end before L/2");
    const double h = g.spacing();
    const int nb = std::max(1, static_cast<int>(std::ceil((r2 - r1) / h)));
    std::vector<double> sum(nb, 0.0), rsum(nb, 0.0);
    std::vector<int> cnt(nb, 0);
    DecayFit fit;
    const double hn = detail::h_norm(u, s);
    const int N = g.dim;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Point x = g.point(i);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        if (r < r1 || r > r2) continue;
        const int b = std::min(nb - 1, static_cast<int>((r - r1) / h));
        sum[b] += std::abs(u[i]);
        rsum[b] += r;
        ++cnt[b];
        if (hn > 0.0) fit.radial_bound = std::max(fit.radial_bound, std::pow(r, 0.5 * (N - 1)) * std::abs(u[i]) / hn);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int b = 0; b < nb; ++b) {
        if (cnt[b] == 0) continue;
        const double mean = sum[b] / cnt[b];
        if (mean < 1e-14) throw DomainError("decay_fit: shell average below 1e-14 in the window");
        const double r = rsum[b] / cnt[b];
        fit.radii.push_back(r);
        fit.shell_means.push_back(mean);
        const double x = std::log(r), y = std::log(mean);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 3) throw DomainError("decay_fit: fewer than 3 shells in the window");
    fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icpt = (sy - fit.exponent * sx) / n;
    fit.prefactor = std::exp(icpt);
    double ss = 0.0;
    for (std::size_t k = 0; k < fit.radii.size(); ++k) {
        const double e = std::log(fit.shell_means[k]) - icpt - fit.exponent * std::log(fit.radii[k]);
        ss += e * e;
    }
    fit.rms = std::sqrt(ss / n);
    return fit;
}

}  // namespace fracground
