#include "crt/special.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <random>

using namespace crt;

TEST_SUITE_BEGIN("special");

TEST_CASE("cheb_T pinned values") {
    CHECK(cheb_T(2, 0.5) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(cheb_T(3, 2.0) == doctest::Approx(26.0).epsilon(1e-13));
    // hyperbolic branch with sign flip
    const long double ref = -std::cosh(7.0L * std::acosh(1.3L));
    CHECK(cheb_T(7, -1.3) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-13));
}

TEST_CASE("cheb_U pinned values and limits") {
    CHECK(cheb_U(2, 0.5) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(cheb_U(-1, 0.7) == 0.0);
    CHECK(cheb_U(3, 1.0) == doctest::Approx(4.0));
    CHECK(cheb_U(3, -1.0) == doctest::Approx(-4.0));
    CHECK(cheb_U(4, -1.0) == doctest::Approx(5.0));
    CHECK_THROWS_AS(cheb_U(-2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(cheb_T(-1, 0.0), std::invalid_argument);
}

TEST_CASE("ChebBranchSpec admits order -1 only for the second kind") {
    CHECK(ChebBranchSpec{ChebKind::SecondKind, -1}.valid());
    CHECK_FALSE(ChebBranchSpec{ChebKind::FirstKind, -1}.valid());
    CHECK_FALSE(ChebBranchSpec{ChebKind::SecondKind, -2}.valid());
    CHECK(ChebBranchSpec{ChebKind::FirstKind, 5}.valid());
}

TEST_CASE("branch continuity across z = +-1") {
    for (int k = 0; k <= 64; ++k) {
        CHECK(std::abs(cheb_T(k, 1.0 + 1e-9) - 1.0) <= 1e-6);
        CHECK(std::abs(cheb_T(k, 1.0 - 1e-9) - 1.0) <= 1e-6);
        const double sign = k % 2 == 0 ? 1.0 : -1.0;
        CHECK(std::abs(cheb_T(k, -1.0 + 1e-9) - sign) <= 1e-6);
        CHECK(std::abs(cheb_T(k, -1.0 - 1e-9) - sign) <= 1e-6);
    }
}

TEST_CASE("recurrences hold on |z| <= 1.5 and the U identity on |z| <= 2") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> z15(-1.5, 1.5), z20(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double z = z15(rng);
        for (int k = 1; k < 64; ++k) {
            const double lhs = cheb_T(k + 1, z);
            const double rhs = 2.0 * z * cheb_T(k, z) - cheb_T(k - 1, z);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
            const double lu = cheb_U(k + 1, z);
            const double ru = 2.0 * z * cheb_U(k, z) - cheb_U(k - 1, z);
            CHECK(std::abs(lu - ru) <= 1e-10 * std::max(1.0, std::abs(lu)));
        }
    }
    for (int trial = 0; trial < 200; ++trial) {
        const double z = z20(rng);
        for (int k = 1; k <= 64; ++k) {
            const double lu = cheb_U(k, z);
            const double ru = 2.0 * z * cheb_U(k - 1, z) - cheb_U(k - 2, z);
            CHECK(std::abs(lu - ru) <= 1e-12 * std::max(1.0, std::abs(lu)));
        }
    }
}

TEST_CASE("hilbert: zero input, input validation") {
    std::vector<double> zeros(64, 0.0);
    auto h = hilbert_uniform(zeros);
    for (double v : h) CHECK(v == 0.0);
    CHECK_THROWS_AS(hilbert_uniform(std::vector<double>(7, 1.0)), std::invalid_argument);
}

TEST_CASE("hilbert of truncated Cauchy matches the PV quadrature oracle") {
    const int n = 4096;
    std::vector<double> t(n), g(n);
    for (int i = 0; i < n; ++i) {
        t[i] = -20.0 + 40.0 * i / (n - 1);
        g[i] = 1.0 / (1.0 + t[i] * t[i]);
    }
    auto h = hilbert_uniform(g);
    auto f = [](double u) { return 1.0 / (1.0 + u * u); };
    double worst = 0.0;
    for (int i = 0; i < n; i += 64) {
        if (std::abs(t[i]) > 10.0) continue; // central half
        const double ref = oracle::pv_integral(f, -20.0, 20.0, t[i]) / std::numbers::pi;
        worst = std::max(worst, std::abs(h[i] - ref));
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("hilbert anti-involution on a band-limited bump") {
    const int n = 1024;
    std::vector<double> g(n);
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = -20.0 + 40.0 * i / (n - 1);
        g[i] = std::cos(8.0 * t) * std::exp(-t * t / 2.0);
        nrm += g[i] * g[i];
    }
    auto hh = hilbert_uniform(hilbert_uniform(g));
    double err = 0.0;
    for (int i = 0; i < n; ++i) err += (hh[i] + g[i]) * (hh[i] + g[i]);
    CHECK(std::sqrt(err / nrm) <= 1e-6);
}

TEST_CASE("hilbert maps even to odd") {
    const int n = 513; // odd count, symmetric grid around 0
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) {
        const double t = -10.0 + 20.0 * i / (n - 1);
        g[i] = std::exp(-t * t);
    }
    auto h = hilbert_uniform(g);
    for (int i = 0; i < n; ++i)
        CHECK(std::abs(h[i] + h[n - 1 - i]) <= 1e-8); // odd symmetry
}

TEST_SUITE_END();
