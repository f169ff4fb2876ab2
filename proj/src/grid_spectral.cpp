#include "fracground/grid_spectral.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracground/detail/fft.hpp"
#include "fracground/detail/oscillatory.hpp"

namespace fracground {

using std::numbers::pi;

// ---------------------------------------------------------------------------
// BoxGrid / FracOrder / RealField

BoxGrid::BoxGrid(int N, double L, int M) : dim(N), half_width(L), points_per_axis(M) {
    if (N < 1 || N > 3) throw DomainError("grid dimension must be 1, 2 or 3");
    if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("grid half-width must be positive");
    if (M < 8 || M % 2 != 0) throw DomainError("points per axis must be even and >= 8");
    double total = std::pow(static_cast<double>(M), N);
    if (total > 1.0e9) throw DomainError("grid too large");
}

double BoxGrid::cell_volume() const { return std::pow(spacing(), dim); }

std::size_t BoxGrid::size() const {
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(points_per_axis);
    return n;
}

double BoxGrid::frequency(int k) const { return pi * signed_index(k) / half_width; }

std::array<int, 3> BoxGrid::unflatten(std::size_t i) const {
    std::array<int, 3> j{0, 0, 0};
    const auto M = static_cast<std::size_t>(points_per_axis);
    for (int a = dim - 1; a >= 0; --a) {
        j[a] = static_cast<int>(i % M);
        i /= M;
    }
    return j;
}

std::size_t BoxGrid::flatten(const std::array<int, 3>& j) const {
    std::size_t i = 0;
    for (int a = 0; a < dim; ++a) i = i * points_per_axis + j[a];
    return i;
}

Point BoxGrid::point(std::size_t i) const {
    auto j = unflatten(i);
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) x[a] = coord(j[a]);
    return x;
}

FracOrder::FracOrder(double s) : s_(s) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("fractional order s must lie in (0,1)");
}

RealField::RealField(const BoxGrid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) throw DomainError("field length does not match grid");
}

RealField RealField::from_function(const BoxGrid& g, const std::function<double(const Point&)>& f) {
    RealField u(g);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = f(g.point(i));
    return u;
}

RealField& RealField::operator+=(const RealField& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
}

RealField& RealField::operator-=(const RealField& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
}

RealField& RealField::operator*=(double c) {
    for (double& v : values) v *= c;
    return *this;
}

bool RealField::all_finite() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(double c, RealField a) { return a *= c; }

RealField hadamard(const RealField& a, const RealField& b) {
    RealField r(a.grid);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] * b[i];
    return r;
}

double inner(const RealField& a, const RealField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * a.grid.cell_volume();
}

double l2_norm(const RealField& u) { return std::sqrt(inner(u, u)); }

double integral(const RealField& u) {
    double s = 0.0;
    for (double v : u.values) s += v;
    return s * u.grid.cell_volume();
}

double sup_norm(const RealField& u) {
    double m = 0.0;
    for (double v : u.values) m = std::max(m, std::abs(v));
    return m;
}

// ---------------------------------------------------------------------------
// Transforms

namespace {

void require_finite(const RealField& u) {
    if (!u.all_finite()) throw DomainError("field contains non-finite values");
}

}  // namespace

SpectralCoeffs forward_transform(const RealField& u) {
    require_finite(u);
    const BoxGrid& g = u.grid;
    detail::cvec in(u.values.begin(), u.values.end());
    detail::cvec out = detail::c2c(g, std::move(in), -1);
    const double w = g.cell_volume();
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto k = g.unflatten(i);
        int parity = 0;
        for (int a = 0; a < g.dim; ++a) parity += k[a];
        // exp(-i xi_k x_j) = (-1)^k exp(-2 pi i j k / M) because x_0 = -L.
        out[i] *= (parity % 2 ? -w : w);
    }
    return {g, std::move(out)};
}

RealField inverse_transform(const SpectralCoeffs& c) {
    const BoxGrid& g = c.grid;
    detail::cvec in(c.coeffs);
    for (std::size_t i = 0; i < in.size(); ++i) {
        auto k = g.unflatten(i);
        int parity = 0;
        for (int a = 0; a < g.dim; ++a) parity += k[a];
        if (parity % 2) in[i] = -in[i];
    }
    detail::cvec out = detail::c2c(g, std::move(in), +1);
    RealField u(g);
    const double scale = 1.0 / std::pow(2.0 * g.half_width, g.dim);
    for (std::size_t i = 0; i < out.size(); ++i) u[i] = out[i].real() * scale;
    return u;
}

RealField frac_laplacian(const RealField& u, FracOrder s) {
    return detail::apply_symbol(u, *detail::half_frac_symbol(u.grid, s.value()));
}

RealField laplacian(const RealField& u) { return detail::apply_symbol(u, *detail::half_xi2(u.grid)); }

RealField partial(const RealField& u, int axis) {
    if (axis < 0 || axis >= u.grid.dim) throw DomainError("axis out of range");
    auto xi = detail::half_xi_axis(u.grid, axis);
    detail::cvec c = detail::r2c(u);
    const std::complex<double> I(0.0, 1.0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= I * (*xi)[i];
    return detail::c2r(u.grid, std::move(c));
}

RealField radial_derivative(const RealField& u) {
    const BoxGrid& g = u.grid;
    RealField r(g);
    for (int a = 0; a < g.dim; ++a) {
        RealField d = partial(u, a);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += g.coord(g.unflatten(i)[a]) * d[i];
    }
    return r;
}

double kinetic_energy(const RealField& u, FracOrder s) {
    const BoxGrid& g = u.grid;
    detail::cvec c = detail::r2c(u);
    auto sym = detail::half_frac_symbol(g, s.value());
    const int M = g.points_per_axis;
    const int last = M / 2 + 1;
    double sum = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const int kl = static_cast<int>(i % last);
        // Half-spectrum entries other than k_last in {0, M/2} stand for a conjugate pair.
        const double w = (kl == 0 || kl == M / 2) ? 1.0 : 2.0;
        sum += w * (*sym)[i] * std::norm(c[i]);
    }
    return sum * g.cell_volume() / static_cast<double>(g.size());
}

// ---------------------------------------------------------------------------
// Singular-integral realizations

namespace {

double sphere_area(int N) {
    switch (N) {
    case 1: return 2.0;
    case 2: return 2.0 * pi;
    default: return 4.0 * pi;
    }
}

/// Epstein zeta of the lattice Z^N, sum' |k|^{-sigma}, analytically continued.
double epstein_zeta(int N, double sigma) {
    if (N == 1) return 2.0 * boost::math::zeta(sigma);
    // Theta-function splitting at t = 1 (Ewald form).
    const double a = 0.5 * sigma;
    const double b = 0.5 * (N - sigma);
    const int R = 6;
    double sum = -1.0 / a - 1.0 / b;
    std::array<int, 3> k{};
    const int lo = -R, hi = R;
    for (k[0] = lo; k[0] <= hi; ++k[0])
        for (k[1] = lo; k[1] <= hi; ++k[1])
            for (k[2] = (N == 3 ? lo : 0); k[2] <= (N == 3 ? hi : 0); ++k[2]) {
                const double r2 = double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
                if (r2 == 0.0) continue;
                const double x = pi * r2;
                sum += boost::math::tgamma(a, x) * std::pow(x, -a) + boost::math::tgamma(b, x) * std::pow(x, -b);
            }
    return sum * std::pow(pi, a) / boost::math::tgamma(a);
}

/// int over the complement of the box [lo, hi)^N of |x - y|^{-N-2s} dy.
double exterior_integral(int N, const Point& x, double lo, double hi, double s) {
    if (N == 1) {
        return (std::pow(x[0] - lo, -2.0 * s) + std::pow(hi - x[0], -2.0 * s)) / (2.0 * s);
    }
    auto rho = [&](const Point& w) {
        double r = std::numeric_limits<double>::infinity();
        for (int a = 0; a < N; ++a) {
            if (w[a] > 0.0) r = std::min(r, (hi - x[a]) / w[a]);
            else if (w[a] < 0.0) r = std::min(r, (lo - x[a]) / w[a]);
        }
        return r;
    };
    if (N == 2) {
        // Split the circle at the corner directions where rho is not smooth.
        std::vector<double> breaks;
        for (double cx : {lo, hi})
            for (double cy : {lo, hi}) {
                double t = std::atan2(cy - x[1], cx - x[0]);
                breaks.push_back(t < 0 ? t + 2 * pi : t);
            }
        std::sort(breaks.begin(), breaks.end());
        breaks.push_back(breaks.front() + 2 * pi);
        auto f = [&](double t) { return std::pow(rho({std::cos(t), std::sin(t), 0.0}), -2.0 * s); };
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
            total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, breaks[i], breaks[i + 1], 8,
                                                                                    1e-10);
        return total / (2.0 * s);
    }
    // N = 3: product Gauss-Legendre in cos(theta) times trapezoid in phi.
    static const auto& gl = boost::math::quadrature::gauss<double, 40>::abscissa();
    static const auto& gw = boost::math::quadrature::gauss<double, 40>::weights();
    const int nphi = 96;
    double total = 0.0;
    for (std::size_t i = 0; i < gl.size(); ++i) {
        for (int sign : {-1, 1}) {
            if (gl[i] == 0.0 && sign < 0) continue;
            const double mu = sign * gl[i];
            const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
            double ring = 0.0;
            for (int j = 0; j < nphi; ++j) {
                const double ph = 2 * pi * (j + 0.5) / nphi;
                ring += std::pow(rho({st * std::cos(ph), st * std::sin(ph), mu}), -2.0 * s);
            }
            total += gw[i] * ring * 2 * pi / nphi;
        }
    }
    return total / (2.0 * s);
}

struct Offset {
    std::array<int, 3> k;
    double weight;  // |k h|^{-N-2s} h^N
};

}  // namespace

RealField frac_laplacian_pv(const RealField& u, FracOrder s, double cutoff) {
    if (!(cutoff > 0.0)) throw DomainError("principal-value cutoff must be positive");
    require_finite(u);
    const BoxGrid& g = u.grid;
    const int N = g.dim, M = g.points_per_axis;
    const double h = g.spacing(), sv = s.value();
    const double C = normalization_constant(N, s);

    // Offsets closer than the cutoff are replaced by their second-order Taylor value,
    // which is folded into the lattice-zeta correction below.
    const double kc = cutoff / h;
    double dropped = 0.0;
    std::vector<Offset> offs;
    std::array<int, 3> k{};
    const int R = M - 1;
    for (k[0] = -R; k[0] <= R; ++k[0])
        for (k[1] = (N > 1 ? -R : 0); k[1] <= (N > 1 ? R : 0); ++k[1])
            for (k[2] = (N > 2 ? -R : 0); k[2] <= (N > 2 ? R : 0); ++k[2]) {
                const double r2 = double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
                if (r2 == 0.0) continue;
                const double r = std::sqrt(r2);
                if (r < kc) {
                    dropped += std::pow(r, 2.0 - N - 2.0 * sv);
                    continue;
                }
                offs.push_back({k, std::pow(r * h, -N - 2.0 * sv) * std::pow(h, N)});
            }
    const double zeta_part = epstein_zeta(N, N + 2.0 * sv - 2.0) - dropped;

    RealField lap = laplacian(u);  // symbol |xi|^2, i.e. -Delta u
    RealField out(g);
    const double lo = -g.half_width - 0.5 * h, hi = g.half_width - 0.5 * h;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto j = g.unflatten(i);
        double acc = 0.0;
        for (const Offset& o : offs) {
            std::array<int, 3> jj{j[0] + o.k[0], j[1] + o.k[1], j[2] + o.k[2]};
            bool inside = true;
            for (int a = 0; a < N; ++a) inside = inside && jj[a] >= 0 && jj[a] < M;
            if (!inside) continue;
            acc += (u[i] - u[g.flatten(jj)]) * o.weight;
        }
        // Generalized Euler-Maclaurin term of the punctured lattice sum.
        acc += std::pow(h, 2.0 - 2.0 * sv) * (-lap[i] / (2.0 * N)) * zeta_part;
        acc += u[i] * exterior_integral(N, g.point(i), lo, hi, sv);
        out[i] = C * acc;
    }
    return out;
}

double normalization_constant(int N, FracOrder s) {
    if (N < 1 || N > 3) throw DomainError("dimension must be 1, 2 or 3");
    const double sv = s.value();
    // 1/C = |S^{N-1}| int_0^inf (1 - phi_N(r)) r^{-1-2s} dr, phi_N the sphere average of cos(r w_1).
    auto one_minus_phi = [N](double r) {
        if (N == 1) {
            const double h = std::sin(0.5 * r);
            return 2.0 * h * h;
        }
        return N == 2 ? 1.0 - std::cyl_bessel_j(0.0, r) : 1.0 - std::sin(r) / r;
    };
    auto phi = [N](double r) {
        return N == 1 ? std::cos(r) : N == 2 ? std::cyl_bessel_j(0.0, r) : std::sin(r) / r;
    };
    // Start the tail at a zero of phi_N so every interval carries one sign lobe.
    const double a = N == 1 ? 1.5 * pi : N == 2 ? 2.404825557695773 : pi;
    boost::math::quadrature::tanh_sinh<double> ts;
    auto head_f = [&](double r) {
        if (r < 1e-3) {
            // Taylor form of (1 - phi_N(r)) / r^2 avoids cancellation near the origin.
            const double c2 = N == 1 ? 1.0 / 24.0 : N == 2 ? 1.0 / 64.0 : 1.0 / 120.0;
            return (1.0 / (2.0 * N) - c2 * r * r) * std::pow(r, 1.0 - 2.0 * sv);
        }
        return one_minus_phi(r) * std::pow(r, -1.0 - 2.0 * sv);
    };
    const double head = ts.integrate(head_f, 0.0, a, 1e-12);
    const double tail = detail::integrate_oscillatory_tail(
        [&](double r) { return phi(r) * std::pow(r, -1.0 - 2.0 * sv); }, a, a + pi, pi, 1e-11);
    const double inv = sphere_area(N) * (head + std::pow(a, -2.0 * sv) / (2.0 * sv) - tail);
    if (!(inv > 0.0) || !std::isfinite(inv)) throw std::runtime_error("normalization constant quadrature failed");
    return 1.0 / inv;
}

double gagliardo_seminorm_sq(const RealField& u, FracOrder s) {
    const BoxGrid& g = u.grid;
    if (g.size() > 4096) throw DomainError("grid too large for the Gagliardo double sum (M^N > 4096)");
    require_finite(u);
    const int N = g.dim, M = g.points_per_axis;
    const double h = g.spacing(), sv = s.value(), w = g.cell_volume();
    std::vector<RealField> grad;
    for (int a = 0; a < N; ++a) grad.push_back(partial(u, a));
    const double zeta = epstein_zeta(N, N + 2.0 * sv - 2.0);
    const double lo = -g.half_width - 0.5 * h, hi = g.half_width - 0.5 * h;

    double total = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto ji = g.unflatten(i);
        double row = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) {
            if (j == i) continue;
            const auto jj = g.unflatten(j);
            double r2 = 0.0;
            for (int a = 0; a < N; ++a) {
                const double d = (ji[a] - jj[a]) * h;
                r2 += d * d;
            }
            const double du = u[i] - u[j];
            row += du * du * std::pow(r2, -0.5 * (N + 2.0 * sv));
        }
        row *= w;
        double g2 = 0.0;
        for (int a = 0; a < N; ++a) g2 += grad[a][i] * grad[a][i];
        row -= std::pow(h, 2.0 - 2.0 * sv) * (g2 / N) * zeta;
        // Pairs with one point outside the box, where u vanishes, counted twice.
        row += 2.0 * u[i] * u[i] * exterior_integral(N, g.point(i), lo, hi, sv);
        total += row * w;
    }
    (void)M;
    return total;
}

// ---------------------------------------------------------------------------
// Geometry

namespace {

Eigen::MatrixXd dilation_matrix(const BoxGrid& g, double theta) {
    const int M = g.points_per_axis;
    const double L = g.half_width;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, M);
    for (int i = 0; i < M; ++i) {
        const double xs = g.coord(i) / theta;
        if (xs < -L * (1.0 + 1e-12) || xs >= L) continue;
        for (int j = 0; j < M; ++j) {
            double t = std::remainder(xs - g.coord(j), 2.0 * L);
            double v;
            if (std::abs(t) < 1e-14 * L) {
                v = 1.0;
            } else {
                v = std::sin(M * pi * t / (2.0 * L)) / (M * std::tan(pi * t / (2.0 * L)));
            }
            A(i, j) = v;
        }
    }
    return A;
}

/// Apply the same M x M matrix along every axis of a row-major field.
RealField apply_separable(const RealField& u, const Eigen::MatrixXd& A) {
    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const BoxGrid& g = u.grid;
    const int M = g.points_per_axis;
    RealField out(g);
    if (g.dim == 1) {
        Eigen::Map<const Eigen::VectorXd> x(u.values.data(), M);
        Eigen::Map<Eigen::VectorXd>(out.values.data(), M) = A * x;
    } else if (g.dim == 2) {
        Eigen::Map<const RowMat> X(u.values.data(), M, M);
        Eigen::Map<RowMat>(out.values.data(), M, M) = A * X * A.transpose();
    } else {
        const Eigen::Index MM = static_cast<Eigen::Index>(M) * M;
        // Axis 0: treat as (M, M*M).
        RowMat t0 = A * Eigen::Map<const RowMat>(u.values.data(), M, MM);
        // Axis 2: treat as (M*M, M).
        RowMat t2 = Eigen::Map<const RowMat>(t0.data(), MM, M) * A.transpose();
        // Axis 1: per slab along axis 0.
        for (int i0 = 0; i0 < M; ++i0) {
            Eigen::Map<const RowMat> slab(t2.data() + i0 * MM, M, M);
            Eigen::Map<RowMat>(out.values.data() + i0 * MM, M, M) = A * slab;
        }
    }
    return out;
}

}  // namespace

double dilation_overflow(const RealField& u, double theta) {
    if (theta <= 1.0) return 0.0;
    const BoxGrid& g = u.grid;
    const double lim = g.half_width / theta;
    double out = 0.0, total = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Point x = g.point(i);
        const double m = u[i] * u[i];
        total += m;
        bool inside = true;
        for (int a = 0; a < g.dim; ++a) inside = inside && x[a] >= -lim && x[a] < lim;
        if (!inside) out += m;
    }
    return total > 0.0 ? out / total : 0.0;
}

RealField dilate(const RealField& u, double theta, double guard) {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("dilation factor must be positive");
    require_finite(u);
    if (theta == 1.0) return u;
    const double over = dilation_overflow(u, theta);
    if (over > guard)
        throw DomainError("dilation pushes support out of the box (tail mass " + std::to_string(over) + ")");
    return apply_separable(u, dilation_matrix(u.grid, theta));
}

RealField translate(const RealField& u, const Point& y) {
    const BoxGrid& g = u.grid;
    const double h = g.spacing();
    const int M = g.points_per_axis;
    bool lattice = true;
    std::array<int, 3> shift{0, 0, 0};
    for (int a = 0; a < g.dim; ++a) {
        const double q = y[a] / h;
        const double r = std::round(q);
        if (std::abs(q - r) > 1e-9) lattice = false;
        shift[a] = static_cast<int>(std::fmod(std::fmod(r, M) + M, M));
    }
    if (lattice) {
        RealField out(g);
        for (std::size_t i = 0; i < u.size(); ++i) {
            auto j = g.unflatten(i);
            for (int a = 0; a < g.dim; ++a) j[a] = (j[a] + shift[a]) % M;
            out[g.flatten(j)] = u[i];
        }
        return out;
    }
    detail::cvec c = detail::r2c(u);
    const int last = M / 2 + 1;
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::array<int, 3> k{0, 0, 0};
        std::size_t rem = i;
        k[g.dim - 1] = static_cast<int>(rem % last);
        rem /= last;
        for (int a = g.dim - 2; a >= 0; --a) {
            k[a] = static_cast<int>(rem % M);
            rem /= M;
        }
        std::complex<double> f(1.0, 0.0);
        for (int a = 0; a < g.dim; ++a) {
            const double ph = g.frequency(k[a]) * y[a];
            // The Nyquist mode has no conjugate partner: keep its real part only.
            f *= (k[a] == M / 2) ? std::complex<double>(std::cos(ph), 0.0) : std::polar(1.0, -ph);
        }
        c[i] *= f;
    }
    return detail::c2r(g, std::move(c));
}

RealField radial_symmetrize(const RealField& u) {
    const BoxGrid& g = u.grid;
    const int M = g.points_per_axis;
    const std::size_t nkeys = static_cast<std::size_t>(g.dim) * (M / 2) * (M / 2) + 1;
    std::vector<double> sum(nkeys, 0.0);
    std::vector<int> count(nkeys, 0);
    std::vector<std::size_t> key(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        auto j = g.unflatten(i);
        std::size_t r2 = 0;
        for (int a = 0; a < g.dim; ++a) {
            const long d = j[a] - M / 2;
            r2 += static_cast<std::size_t>(d * d);
        }
        key[i] = r2;
        sum[r2] += u[i];
        ++count[r2];
    }
    RealField out(g);
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = sum[key[i]] / count[key[i]];
    return out;
}

double tail_mass(const RealField& u) {
    const BoxGrid& g = u.grid;
    const double r0 = 0.5 * g.half_width;
    double out = 0.0, total = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Point x = g.point(i);
        const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        const double m = u[i] * u[i];
        total += m;
        if (r2 >= r0 * r0) out += m;
    }
    return total > 0.0 ? out / total : 0.0;
}

RealField pad_field(const RealField& u, int padding) {
    if (padding < 1) throw DomainError("padding factor must be >= 1");
    if (padding == 1) return u;
    const BoxGrid& g = u.grid;
    BoxGrid big(g.dim, padding * g.half_width, padding * g.points_per_axis);
    const int off = (padding - 1) * g.points_per_axis / 2;
    RealField out(big);
    for (std::size_t i = 0; i < u.size(); ++i) {
        auto j = g.unflatten(i);
        for (int a = 0; a < g.dim; ++a) j[a] += off;
        out[big.flatten(j)] = u[i];
    }
    return out;
}

double pohozaev_pointwise_residual(const RealField& u, FracOrder s, int padding) {
    const BoxGrid& g = u.grid;
    RealField v = pad_field(u, padding);
    RealField lu = frac_laplacian(v, s);
    RealField a = frac_laplacian(radial_derivative(v), s);
    RealField c = radial_derivative(lu);
    const double sv = s.value();
    const int off = (padding - 1) * g.points_per_axis / 2;
    double res = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        auto j = g.unflatten(i);
        const Point x = g.point(i);
        for (int d = 0; d < g.dim; ++d) j[d] += off;
        const std::size_t p = v.grid.flatten(j);
        scale = std::max(scale, std::abs(lu[p]));
        bool central = true;
        for (int d = 0; d < g.dim; ++d) central = central && std::abs(x[d]) < 0.5 * g.half_width;
        if (!central) continue;
        res = std::max(res, std::abs(a[p] - 2.0 * sv * lu[p] - c[p]));
    }
    return scale > 0.0 ? res / scale : 0.0;
}

}  // namespace fracground
