#include "crt/forward.hpp"

#include "crt/phantoms.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <random>

using namespace crt;
namespace {
constexpr double kPi = std::numbers::pi;

Image2D unit_disc_image(int n) {
    Image2D img(n, n, 1.0);
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            img.at(ix, iy) = img.x(ix) * img.x(ix) + img.y(iy) * img.y(iy) <= 1.0 ? 1.0 : 0.0;
    return img;
}
} // namespace

TEST_SUITE_BEGIN("forward");

TEST_CASE("axis_vector geometry") {
    auto a = axis_vector(0.0, kPi / 2);
    CHECK(a[0] == doctest::Approx(-1.0));
    CHECK(std::abs(a[1]) <= 1e-15);
    CHECK(std::abs(a[2]) <= 1e-15);
    auto b = axis_vector(kPi / 2, kPi / 2);
    CHECK(std::abs(b[0]) <= 1e-15);
    CHECK(b[1] == doctest::Approx(-1.0));
    auto c = axis_vector(1.234, 1e-9);
    CHECK(c[2] == doctest::Approx(1.0));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, kPi);
    for (int i = 0; i < 50; ++i) {
        auto v = axis_vector(2 * u(rng), u(rng));
        CHECK(std::abs(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] - 1.0) <= 1e-15);
    }
}

TEST_CASE("xray_2d: diameter chord of the unit disc") {
    Image2D img = unit_disc_image(401);
    RayQuadratureSpec q{1e-3, 4.0};
    const double v = xray_2d(img, {1.0, 0.0}, {-1.0, 0.0}, q);
    CHECK(std::abs(v - 2.0) <= 2.0 * q.step);
    CHECK_THROWS_AS(xray_2d(img, {1.0, 0.0}, {-1.0, 1e-2}, q), std::invalid_argument);
}

TEST_CASE("xray_2d: ray missing the support disc is exactly zero") {
    Image2D img = unit_disc_image(101);
    const double v = xray_2d(img, {1.6, -3.0}, {0.0, 1.0}, {1e-3, 8.0});
    CHECK(v == 0.0);
}

TEST_CASE("xray_2d matches the adaptive quadrature oracle on a Gaussian bump") {
    const int n = 1001;
    Image2D img(n, n, 1.0);
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy) {
            const double r2 = img.x(ix) * img.x(ix) + img.y(iy) * img.y(iy);
            img.at(ix, iy) = std::exp(-r2 / 0.1);
        }
    RayQuadratureSpec q{5e-4, 4.0};
    const double got = xray_2d(img, {1.0, 0.0}, {-1.0, 0.0}, q);
    const double want = oracle::integrate(
        [](double t) { return std::exp(-(1.0 - t) * (1.0 - t) / 0.1); }, 0.0, 2.4142, 1e-12);
    CHECK(std::abs(got - want) <= 1e-4);
}

TEST_CASE("vline_forward: chords of a centered disc") {
    Image2D img = phantom_disc2d(801, 0.5);
    std::vector<double> psis{std::asin(0.1), std::asin(0.3), std::asin(0.45), std::asin(0.6)};
    RayQuadratureSpec q{1e-3, 4.0};
    VlineSinogram s = vline_forward(img, 4, psis, q);
    for (int k = 0; k < 4; ++k) {
        for (int j = 0; j < 3; ++j) {
            const double ss = std::sin(psis[j]);
            const double want = 4.0 * std::sqrt(0.25 - ss * ss);
            CHECK(std::abs(s.at(k, j) - want) <= 4.0 * q.step);
        }
        CHECK(s.at(k, 3) == 0.0); // sin psi = 0.6 > 0.5 misses the disc
    }
}

TEST_CASE("radon_2d chords and support") {
    Image2D img = phantom_disc2d(801, 1.0);
    RayQuadratureSpec q{1e-3, 4.0};
    CHECK(std::abs(radon_2d(img, 0.3, 0.0, q) - 2.0) <= 2.0 * q.step);
    CHECK(radon_2d(img, 0.7, 1.0, q) == 0.0);
    CHECK(radon_2d(img, 0.7, -1.2, q) == 0.0);
}

TEST_CASE("V-line equals the two-angle Radon combination on a smooth bump") {
    const int n = 401;
    Image2D img(n, n, 1.0);
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy) {
            const double dx = img.x(ix) - 0.2, dy = img.y(iy) + 0.1;
            img.at(ix, iy) = std::exp(-(dx * dx + dy * dy) / 0.05);
        }
    RayQuadratureSpec q{1e-3, 4.0};
    for (auto [phi, psi] : {std::pair{0.4, 0.5}, std::pair{2.1, 0.9}, std::pair{4.0, 1.2}}) {
        const double v = xray_2d(img, {std::cos(phi), std::sin(phi)},
                                 {-std::cos(phi - psi), -std::sin(phi - psi)}, q) +
                         xray_2d(img, {std::cos(phi), std::sin(phi)},
                                 {-std::cos(phi + psi), -std::sin(phi + psi)}, q);
        const double r = radon_2d(img, phi - psi + kPi / 2, std::sin(psi), q) +
                         radon_2d(img, phi + psi - kPi / 2, std::sin(psi), q);
        CHECK(std::abs(v - r) <= 1e-2 * std::max(std::abs(r), 1e-6));
    }
}

TEST_CASE("radon_3d: disc area of a ball and support bound") {
    const double c[3] = {0.0, 0.0, 0.0};
    Volume3D vol =
        phantom_ball3d(161, 161, 161, 1.0, -1.0, 1.0, c, 0.5, BallKind::Indicator, 4);
    RayQuadratureSpec q{4e-3, 4.0};
    const double got = radon_3d(vol, {0.0, 0.0, 1.0}, 0.0, q);
    CHECK(std::abs(got - kPi * 0.25) <= 1e-3);
    const double got2 = radon_3d(vol, {1.0, 0.0, 0.0}, 0.3, q);
    CHECK(std::abs(got2 - kPi * (0.25 - 0.09)) <= 1.5e-3);
    CHECK(radon_3d(vol, {0.0, 1.0, 0.0}, 2.1, q) == 0.0);
    CHECK_THROWS_AS(radon_3d(vol, {0.0, 1.1, 0.0}, 0.0, q), std::invalid_argument);
}

TEST_CASE("radon_3d matches the separable Gaussian closed form") {
    const double sigma = 0.22;
    const double c[3] = {0.0, 0.0, 0.0};
    Volume3D vol = phantom_ball3d(201, 201, 201, 1.0, -1.0, 1.0, c, 2 * sigma, BallKind::Gaussian);
    RayQuadratureSpec q{5e-3, 4.0};
    for (double s : {0.0, 0.2, 0.5}) {
        const double want = 2.0 * kPi * sigma * sigma * std::exp(-s * s / (2 * sigma * sigma));
        const double got = radon_3d(vol, {0.0, 0.6, 0.8}, s, q);
        CHECK(std::abs(got - want) <= 1e-4);
    }
}

TEST_CASE("conical_forward: analytic ball values for k = 0 and k = 1") {
    const double c[3] = {0.0, 0.0, 0.0};
    Volume3D vol = phantom_ball3d(121, 121, 121, 1.0, -1.0, 1.0, c, 0.5, BallKind::Indicator);
    auto zs = ConeData::uniform_z(3, -0.05, 0.05);
    std::vector<double> betas{kPi / 2};
    std::vector<double> psis{std::asin(0.3)};
    ConeQuadratureSpec q{256, 2e-3, 4.0};
    ConeData c0 = conical_forward(vol, 0, 2, zs, betas, psis, q);
    const double want0 = 0.3 * 2.0 * kPi * 0.8;
    CHECK(std::abs(c0.at(0, 1, 0, 0) - want0) / want0 <= 5e-3);
    ConeData c1 = conical_forward(vol, 1, 2, zs, betas, psis, q);
    const double want1 = 2.0 * kPi * 0.3 * std::sqrt(0.91) * 0.8;
    CHECK(std::abs(c1.at(0, 1, 0, 0) - want1) / want1 <= 5e-3);
    CHECK_THROWS_AS(conical_forward(vol, -1, 2, zs, betas, psis, q), std::invalid_argument);
}

TEST_CASE("conical_forward of the zero volume is zero") {
    Volume3D vol(17, 17, 17, 1.0, -1.0, 1.0);
    ConeData c = conical_forward(vol, 1, 4, ConeData::uniform_z(4, -0.5, 0.5),
                                 ConeData::midpoint_grid(4), ConeData::midpoint_grid(4),
                                 {32, 1e-2, 3.0});
    for (double v : c.data) CHECK(v == 0.0);
}

TEST_CASE("weighted X-ray homogeneity in the direction argument") {
    const double c[3] = {0.1, -0.05, 0.1};
    Volume3D vol = phantom_ball3d(101, 101, 101, 1.0, -1.0, 1.0, c, 0.4, BallKind::Gaussian);
    RayQuadratureSpec fine{2e-4, 6.0};
    const double lambda = 2.0;
    for (int k : {0, 1, 2}) {
        std::array<double, 3> u{-0.6, 0.1, 0.15};
        std::array<double, 3> lu{u[0] * lambda, u[1] * lambda, u[2] * lambda};
        const double a = xray_3d_weighted(vol, {1.0, 0.0, 0.0}, lu, k, fine);
        const double b = xray_3d_weighted(vol, {1.0, 0.0, 0.0}, u, k, fine);
        const double want = std::pow(lambda, -k - 1) * b;
        CHECK(std::abs(a - want) <= 1e-5 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("forward operators are linear and positivity preserving") {
    Image2D f1 = phantom_disc2d(101, 0.4), f2 = phantom_disc2d(101, 0.7);
    Image2D combo(101, 101, 1.0);
    for (std::size_t i = 0; i < combo.values.size(); ++i)
        combo.values[i] = 2.5 * f1.values[i] + f2.values[i];
    auto psis = VlineSinogram::arcsin_grid(20);
    RayQuadratureSpec q{2e-3, 4.0};
    VlineSinogram s1 = vline_forward(f1, 8, psis, q);
    VlineSinogram s2 = vline_forward(f2, 8, psis, q);
    VlineSinogram sc = vline_forward(combo, 8, psis, q);
    for (std::size_t i = 0; i < sc.data.size(); ++i) {
        CHECK(std::abs(sc.data[i] - (2.5 * s1.data[i] + s2.data[i])) <= 1e-12);
        CHECK(s1.data[i] >= 0.0);
    }
}

TEST_CASE("vline_forward commutes with grid-aligned rotations") {
    const int n = 201, n_phi = 16;
    Image2D img(n, n, 1.0), rot(n, n, 1.0);
    const double dphi = 2.0 * kPi / n_phi;
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy) {
            const double x = img.x(ix), y = img.y(iy);
            auto bump = [](double px, double py) {
                const double dx = px - 0.3, dy = py - 0.15;
                return std::exp(-(dx * dx + dy * dy) / 0.04);
            };
            img.at(ix, iy) = bump(x, y);
            // rotate the phantom by +dphi
            const double xr = std::cos(dphi) * x + std::sin(dphi) * y;
            const double yr = -std::sin(dphi) * x + std::cos(dphi) * y;
            rot.at(ix, iy) = bump(xr, yr);
        }
    auto psis = VlineSinogram::arcsin_grid(24);
    RayQuadratureSpec q{2e-3, 4.0};
    VlineSinogram s = vline_forward(img, n_phi, psis, q);
    VlineSinogram sr = vline_forward(rot, n_phi, psis, q);
    double num = 0.0, den = 0.0;
    for (int k = 0; k < n_phi; ++k)
        for (int j = 0; j < 24; ++j) {
            const double d = sr.at((k + 1) % n_phi, j) - s.at(k, j);
            num += d * d;
            den += s.at(k, j) * s.at(k, j);
        }
    CHECK(std::sqrt(num / den) <= 1e-2);
}

TEST_SUITE_END();
