#include "crt/grids.hpp"

#include "crt/phantoms.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <complex>

using namespace crt;

TEST_SUITE_BEGIN("grids");

TEST_CASE("polar_to_cartesian reproduces a constant disc") {
    const int m = 100;
    PolarCoefficients p(4, m);
    for (int i = 0; i <= m; ++i) p.at(0, i) = 1.0;
    p.at(0, m) = 0.0; // support convention
    Image2D img = polar_to_cartesian(p, 201);
    double worst = 0.0;
    for (int ix = 0; ix < img.n_x; ++ix)
        for (int iy = 0; iy < img.n_y; ++iy) {
            const double r = std::hypot(img.x(ix), img.y(iy));
            if (r < 1.0 - 2.0 / m) worst = std::max(worst, std::abs(img.at(ix, iy) - 1.0));
            if (r > 1.0) CHECK(img.at(ix, iy) == 0.0);
        }
    CHECK(worst <= 2.0 / m);
}

TEST_CASE("polar_to_cartesian of zero coefficients is zero, rejects tiny grids") {
    PolarCoefficients p(2, 10);
    Image2D img = polar_to_cartesian(p, 21);
    for (double v : img.values) CHECK(v == 0.0);
    CHECK_THROWS_AS(polar_to_cartesian(p, 2), std::invalid_argument);
}

TEST_CASE("polar_to_cartesian reproduces F(x) = x_1") {
    const int m = 100;
    PolarCoefficients p(2, m);
    for (int i = 0; i < m; ++i) {
        p.at(1, i) = p.radius(i) / 2.0;
        p.at(-1, i) = p.radius(i) / 2.0;
    }
    Image2D img = polar_to_cartesian(p, 151);
    double worst = 0.0;
    for (int ix = 0; ix < img.n_x; ++ix)
        for (int iy = 0; iy < img.n_y; ++iy) {
            const double r = std::hypot(img.x(ix), img.y(iy));
            if (r < 1.0 - 2.0 / m)
                worst = std::max(worst, std::abs(img.at(ix, iy) - img.x(ix)));
        }
    CHECK(worst <= 2.0 / m);
}

TEST_CASE("cartesian_to_polar of the unit-disc indicator") {
    // rings well separated from the boundary pixel band
    const int n = 801, m = 50, nmax = 8;
    Image2D img(n, n, 1.0);
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            img.at(ix, iy) = img.x(ix) * img.x(ix) + img.y(iy) * img.y(iy) <= 1.0 ? 1.0 : 0.0;
    PolarCoefficients p = cartesian_to_polar(img, nmax, m);
    for (int i = 0; i < m; ++i) {
        CHECK(std::abs(p.at(0, i).real() - 1.0) <= 1e-3);
        CHECK(std::abs(p.at(0, i).imag()) <= 1e-12);
        for (int nn = 1; nn <= nmax; ++nn) CHECK(std::abs(p.at(nn, i)) <= 1e-3);
    }
    CHECK(std::abs(p.at(0, m)) == 0.0);
    CHECK_THROWS_AS(cartesian_to_polar(img, 0, m), std::invalid_argument);
    CHECK_THROWS_AS(cartesian_to_polar(img, nmax, 0), std::invalid_argument);
}

TEST_CASE("cartesian_to_polar of zero image is zero") {
    Image2D img(65, 65, 1.0);
    PolarCoefficients p = cartesian_to_polar(img, 8, 20);
    for (const auto& c : p.coeffs) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("conjugate symmetry holds for real images") {
    Image2D img = phantom_smiley(101);
    PolarCoefficients p = cartesian_to_polar(img, 16, 40);
    for (int n = 1; n <= 16; ++n)
        for (int i = 0; i <= 40; ++i)
            CHECK(std::abs(p.at(-n, i) - std::conj(p.at(n, i))) <= 1e-12);
}

TEST_CASE("smiley round trip keeps relative L2 error under 0.05") {
    Image2D img = phantom_smiley(201);
    PolarCoefficients p = cartesian_to_polar(img, 100, 100);
    Image2D back = polar_to_cartesian(p, 201);
    CHECK(rel_l2_error(back.values, img.values) <= 0.05);
}

TEST_CASE("grid containers validate their invariants") {
    CHECK_THROWS_AS(Image2D(2, 10), std::invalid_argument);
    CHECK_THROWS_AS(Volume3D(8, 8, 8, 1.0, 1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(VlineSinogram(8, {0.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(VlineSinogram(8, {0.5, 0.4}), std::invalid_argument);
    std::vector<double> bad_z{0.0, 0.1, 0.3};
    CHECK_THROWS_AS(ConeData(0, 8, bad_z, ConeData::midpoint_grid(4), ConeData::midpoint_grid(4)),
                    std::invalid_argument);
    std::vector<double> closed{0.0, 1.0};
    CHECK_THROWS_AS(ConeData(0, 8, ConeData::uniform_z(3, 0, 1), closed,
                             ConeData::midpoint_grid(4)),
                    std::invalid_argument);
    // arcsine grid sits strictly inside (0, pi/2) with uniform sine
    auto psis = VlineSinogram::arcsin_grid(201);
    CHECK(psis.front() > 0.0);
    CHECK(psis.back() < std::asin(1.0));
    for (int j = 0; j < 201; ++j)
        CHECK(std::sin(psis[j]) == doctest::Approx((j + 1) / 202.0).epsilon(1e-12));
}

TEST_SUITE_END();
