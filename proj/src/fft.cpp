#include "fracground/detail/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace fracground::detail {

namespace {

// FFTW planning is not thread safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

enum class Kind { R2C, C2R, C2C_FWD, C2C_BWD };

fftw_plan get_plan(int N, int M, Kind kind) {
    using Key = std::tuple<int, int, int>;
    static std::map<Key, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(planner_mutex());
    Key key{N, M, static_cast<int>(kind)};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    int n[3] = {M, M, M};
    std::size_t total = 1;
    for (int a = 0; a < N; ++a) total *= static_cast<std::size_t>(M);
    std::size_t hs = total / M * (M / 2 + 1);
    // FFTW_ESTIMATE keeps plans (and therefore results) reproducible run to run.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = nullptr;
    switch (kind) {
    case Kind::R2C: {
        std::vector<double> in(total);
        std::vector<fftw_complex> out(hs);
        p = fftw_plan_dft_r2c(N, n, in.data(), out.data(), flags);
        break;
    }
    case Kind::C2R: {
        std::vector<fftw_complex> in(hs);
        std::vector<double> out(total);
        p = fftw_plan_dft_c2r(N, n, in.data(), out.data(), flags);
        break;
    }
    case Kind::C2C_FWD:
    case Kind::C2C_BWD: {
        std::vector<fftw_complex> in(total), out(total);
        p = fftw_plan_dft(N, n, in.data(), out.data(), kind == Kind::C2C_FWD ? FFTW_FORWARD : FFTW_BACKWARD, flags);
        break;
    }
    }
    if (!p) throw std::runtime_error("FFTW planning failed");
    cache.emplace(key, p);
    return p;
}

using SymKey = std::tuple<int, double, int, int, double>;

template <class F>
std::shared_ptr<const std::vector<double>> cached(const BoxGrid& g, int tag, double param, F&& make) {
    static std::mutex m;
    static std::map<SymKey, std::shared_ptr<const std::vector<double>>> cache;
    SymKey key{g.dim, g.half_width, g.points_per_axis, tag, param};
    {
        std::lock_guard<std::mutex> lock(m);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto v = std::make_shared<const std::vector<double>>(make());
    std::lock_guard<std::mutex> lock(m);
    if (cache.size() > 64) cache.clear();
    cache.emplace(key, v);
    return v;
}

// Visit every half-spectrum entry with its per-axis FFT indices.
template <class F>
void for_each_half(const BoxGrid& g, F&& f) {
    const int M = g.points_per_axis;
    const int last = M / 2 + 1;
    std::size_t idx = 0;
    if (g.dim == 1) {
        for (int k = 0; k < last; ++k) f(idx++, std::array<int, 3>{k, 0, 0});
    } else if (g.dim == 2) {
        for (int k0 = 0; k0 < M; ++k0)
            for (int k1 = 0; k1 < last; ++k1) f(idx++, std::array<int, 3>{k0, k1, 0});
    } else {
        for (int k0 = 0; k0 < M; ++k0)
            for (int k1 = 0; k1 < M; ++k1)
                for (int k2 = 0; k2 < last; ++k2) f(idx++, std::array<int, 3>{k0, k1, k2});
    }
}

}  // namespace

std::size_t half_size(const BoxGrid& g) {
    return g.size() / g.points_per_axis * (g.points_per_axis / 2 + 1);
}

cvec r2c(const RealField& u) {
    const BoxGrid& g = u.grid;
    std::vector<double> in(u.values);
    cvec out(half_size(g));
    fftw_execute_dft_r2c(get_plan(g.dim, g.points_per_axis, Kind::R2C), in.data(),
                         reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

RealField c2r(const BoxGrid& g, cvec c) {
    RealField u(g);
    fftw_execute_dft_c2r(get_plan(g.dim, g.points_per_axis, Kind::C2R),
                         reinterpret_cast<fftw_complex*>(c.data()), u.values.data());
    const double scale = 1.0 / static_cast<double>(g.size());
    for (double& v : u.values) v *= scale;
    return u;
}

cvec c2c(const BoxGrid& g, cvec in, int sign) {
    cvec out(in.size());
    fftw_execute_dft(get_plan(g.dim, g.points_per_axis, sign < 0 ? Kind::C2C_FWD : Kind::C2C_BWD),
                     reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

std::shared_ptr<const std::vector<double>> half_xi2(const BoxGrid& g) {
    return cached(g, 0, 0.0, [&] {
        std::vector<double> v(half_size(g));
        for_each_half(g, [&](std::size_t i, const std::array<int, 3>& k) {
            double s = 0.0;
            for (int a = 0; a < g.dim; ++a) {
                const double xi = g.frequency(k[a]);
                s += xi * xi;
            }
            v[i] = s;
        });
        return v;
    });
}

std::shared_ptr<const std::vector<double>> half_xi_axis(const BoxGrid& g, int axis) {
    return cached(g, 1 + axis, 0.0, [&] {
        std::vector<double> v(half_size(g));
        const int nyq = g.points_per_axis / 2;
        for_each_half(g, [&](std::size_t i, const std::array<int, 3>& k) {
            v[i] = k[axis] == nyq ? 0.0 : g.frequency(k[axis]);
        });
        return v;
    });
}

std::shared_ptr<const std::vector<double>> half_frac_symbol(const BoxGrid& g, double s) {
    return cached(g, 10, s, [&] {
        auto xi2 = half_xi2(g);
        std::vector<double> v(xi2->size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = (*xi2)[i] > 0.0 ? std::pow((*xi2)[i], s) : 0.0;
        return v;
    });
}

std::shared_ptr<const std::vector<double>> half_resolvent_symbol(const BoxGrid& g, double s) {
    return cached(g, 11, s, [&] {
        auto sym = half_frac_symbol(g, s);
        std::vector<double> v(sym->size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (1.0 + (*sym)[i]);
        return v;
    });
}

RealField apply_symbol(const RealField& u, const std::vector<double>& sym) {
    cvec c = r2c(u);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= sym[i];
    return c2r(u.grid, std::move(c));
}

}  // namespace fracground::detail
