#include "doctest.h"

#include <cmath>
#include <limits>

#include "fracground/model.hpp"

using namespace fracground;

namespace {

double central_diff(const std::function<double(double)>& f, double t, double h = 1e-6) {
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("power nonlinearity values") {
    const Nonlinearity nl = Nonlinearity::power(1.0, 1.0, 3.0);
    CHECK(nl.zeta == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(nl.G(nl.zeta) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(nl.g(2.0) == doctest::Approx(6.0));
    CHECK(nl.g(-2.0) == doctest::Approx(-6.0));
    CHECK(nl.G(2.0) == doctest::Approx(2.0));
    CHECK(nl.G(-2.0) == doctest::Approx(2.0));

    const Nonlinearity q = Nonlinearity::power(2.0, 0.5, 2.5);
    CHECK(q.zeta == doctest::Approx(std::pow(3.5 * 2.0 / 1.0, 1.0 / 1.5)).epsilon(1e-14));
    CHECK(q.G(q.zeta) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(q.G(1.2 * q.zeta) > 0.0);
    CHECK(q.G(0.8 * q.zeta) < 0.0);
}

TEST_CASE("derivatives of the nonlinearity by finite differences") {
    for (const Nonlinearity& nl : {Nonlinearity::power(1.0, 1.0, 3.0), Nonlinearity::power(0.7, 2.0, 2.2),
                                   Nonlinearity::power(1.0, 1.0, 3.0, 3.0)}) {
        for (double t : {-2.3, -0.4, 0.1, 0.9, 1.7, 2.6, 4.0}) {
            CAPTURE(t);
            CHECK(central_diff([&](double x) { return nl.G(x); }, t) == doctest::Approx(nl.g(t)).epsilon(1e-6));
            CHECK(central_diff([&](double x) { return nl.g(x); }, t) == doctest::Approx(nl.dg(t)).epsilon(1e-6));
        }
    }
}

TEST_CASE("truncation cap") {
    CHECK_THROWS_AS(Nonlinearity::power(1.0, 1.0, 3.0, 1.0), DomainError);
    CHECK_THROWS_AS(Nonlinearity::power(1.0, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(Nonlinearity::power(-1.0, 1.0, 3.0), DomainError);
    const Nonlinearity nl = Nonlinearity::power(1.0, 1.0, 3.0, 3.0);
    CHECK(truncation_case(nl) == TruncationCase::Capped);
    CHECK(truncation_case(Nonlinearity::power(1.0, 1.0, 3.0)) == TruncationCase::OddExtension);
    CHECK(nl.g(3.5) == 0.0);
    CHECK(nl.G(5.0) == doctest::Approx(nl.G(3.0)));
    CHECK(nl.G(3.0) == doctest::Approx(-4.5 + 81.0 / 4.0));
}

TEST_CASE("splitting g = g1 - g2") {
    for (const Nonlinearity& nl : {Nonlinearity::power(1.0, 1.0, 3.0), Nonlinearity::power(1.0, 1.0, 3.0, 2.0)}) {
        const SplitPair sp = split(nl);
        for (double t : {0.0, 0.3, 1.0, 1.9, 2.5, 6.0}) {
            CAPTURE(t);
            CHECK(sp.g1(t) - sp.g2(t) == doctest::Approx(nl.g(t)).epsilon(1e-14));
            CHECK(sp.g1(t) >= 0.0);
            CHECK(sp.g2(t) >= 0.0);
            CHECK(sp.g1(-t) == -sp.g1(t));
            CHECK(sp.g2(-t) == -sp.g2(t));
            CHECK(sp.G1(t) - sp.G2(t) == doctest::Approx(nl.G(t)).epsilon(1e-12).scale(1.0));
            if (t > 0.0) {
                CHECK(central_diff([&](double x) { return sp.G1(x); }, t) == doctest::Approx(sp.g1(t)).epsilon(1e-6));
                CHECK(central_diff([&](double x) { return sp.G2(x); }, t) == doctest::Approx(sp.g2(t)).epsilon(1e-6));
            }
        }
        CHECK(sp.g1(1e-4) / 1e-4 < 1e-6);
    }
}

TEST_CASE("critical exponent") {
    CHECK(critical_exponent(2, 0.6) == doctest::Approx(5.0));
    CHECK(critical_exponent(3, 0.5) == doctest::Approx(3.0));
    CHECK(critical_exponent(1, 0.6) == std::numeric_limits<double>::infinity());
    CHECK(critical_exponent(1, 0.5) == std::numeric_limits<double>::infinity());
}

TEST_CASE("epsilon bound against the calculus maximum") {
    // For g = -t + t^3, N = 2, s = 0.6: 2* = 5 and the bound is attained at t = sqrt(6 eps)
    // with C = (5/6) / sqrt(6 eps).
    const SplitPair sp = split(Nonlinearity::power(1.0, 1.0, 3.0));
    for (double eps : {0.1, 0.5, 0.9}) {
        CAPTURE(eps);
        CHECK(epsilon_bound_constant(sp, eps, 2, 0.6) == doctest::Approx(5.0 / 6.0 / std::sqrt(6.0 * eps)).epsilon(1e-4));
        CHECK(epsilon_bound_witness(sp, eps, 2, 0.6) == doctest::Approx(std::sqrt(6.0 * eps)).epsilon(1e-2));
    }
    CHECK_THROWS_AS(epsilon_bound_constant(sp, 1.5, 2, 0.6), DomainError);
    CHECK_THROWS_AS(epsilon_bound_constant(sp, 0.5, 1, 0.6), DomainError);
}

TEST_CASE("potential families") {
    const Potential V = Potential::inverse_power(0.5, 1.0);
    CHECK(V.value(0.0) == doctest::Approx(0.5));
    CHECK(V.value(1.0) == doctest::Approx(0.25));
    const Potential W = Potential::inverse_power(0.8, 1.7);
    const Potential G = Potential::gaussian(1.3, 0.4);
    for (const Potential& P : {V, W, G})
        for (double r : {0.2, 1.0, 2.5, 7.0}) {
            CAPTURE(r);
            CHECK(P.virial(r) == doctest::Approx(r * central_diff([&](double x) { return P.value(x); }, r)).epsilon(1e-6));
        }
    CHECK(W.value(2.0) == doctest::Approx(0.8 * std::pow(5.0, -1.7)));
    CHECK(G.value(2.0) == doctest::Approx(1.3 * std::exp(-1.6)));
    CHECK(Potential::zero().is_zero());
    CHECK(Potential::inverse_power(0.0, 1.0).is_zero());
    BoxGrid g(2, 4.0, 16);
    const RealField f = V.field(g, 2.0);
    CHECK(f[g.flatten({12, 8, 0})] == doctest::Approx(V.value(4.0)));
}

TEST_CASE("assumption checks on the canonical model") {
    BoxGrid g(2, 16.0, 128);
    const Nonlinearity nl = Nonlinearity::power(1.0, 1.0, 3.0);
    const AssumptionReport rep = check_assumptions(nl, Potential::inverse_power(0.5, 1.0), g, 0.6, 1.8);
    for (const char* name : {"g1", "g2", "g3", "g3'", "g4", "V1", "V2", "V3", "V4", "V5", "V6"}) {
        CAPTURE(name);
        REQUIRE(rep.find(name) != nullptr);
        CHECK(rep.satisfied(name));
        CHECK(rep.find(name)->margin > 0.0);
    }
    // N V + <grad V, x> = V (N - 2 beta r^2 / (1 + r^2)) turns negative once beta > N/2.
    const AssumptionReport bad = check_assumptions(nl, Potential::inverse_power(0.5, 2.0), g, 0.6, 1.8);
    CHECK_FALSE(bad.satisfied("V6"));
    CHECK(bad.satisfied("V5"));
    CHECK_FALSE(check_assumptions(nl, Potential::zero(), g, 0.6, 1.8).satisfied("V1"));
    CHECK_FALSE(check_assumptions(Nonlinearity::power(1.0, 1.0, 4.5), Potential::zero(), g, 0.6, 1.8).satisfied("g3'"));
}
