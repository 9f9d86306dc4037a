#pragma once

#include "crt/grids.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace crt::detail {

// Clips the ray vertex + t * dir (t >= 0, unit dir) against the volume's
// support cylinder and z slab. Returns false when the ray misses.
inline bool clip_ray_to_volume(const Volume3D& vol, const std::array<double, 3>& v,
                               const std::array<double, 3>& d, double r_max, double& t0,
                               double& t1) {
    t0 = 0.0;
    t1 = r_max > 0.0 ? r_max : std::numeric_limits<double>::infinity();
    const double dxy2 = d[0] * d[0] + d[1] * d[1];
    if (dxy2 > 1e-14) {
        const double ndxy = std::sqrt(dxy2);
        const double ux = d[0] / ndxy, uy = d[1] / ndxy;
        const double b = v[0] * ux + v[1] * uy;
        const double c = v[0] * v[0] + v[1] * v[1] - vol.extent_xy * vol.extent_xy;
        const double disc = b * b - c;
        if (disc <= 0.0) return false;
        const double rt = std::sqrt(disc);
        const double a0 = (-b - rt) / ndxy;
        const double a1 = (-b + rt) / ndxy;
        if (a1 <= 0.0) return false;
        t0 = a0 > 0.0 ? a0 : 0.0;
        t1 = t1 < a1 ? t1 : a1;
    } else if (v[0] * v[0] + v[1] * v[1] > vol.extent_xy * vol.extent_xy) {
        return false;
    }
    if (std::abs(d[2]) > 1e-14) {
        const double b0 = (vol.z_min - v[2]) / d[2];
        const double b1 = (vol.z_max - v[2]) / d[2];
        const double lo = b0 < b1 ? b0 : b1;
        const double hi = b0 < b1 ? b1 : b0;
        if (lo > t0) t0 = lo;
        if (hi < t1) t1 = hi;
    } else if (v[2] < vol.z_min || v[2] > vol.z_max) {
        return false;
    }
    if (t0 < 0.0) t0 = 0.0;
    return t1 > t0;
}

// Enumerates the trapezoidal quadrature samples of the weighted ray integral
// int f(v + t d) t^k dt over the clipped interval. fn(x, y, z, w) receives
// the sample position and its full quadrature weight (step, trapezoid end
// factors and t^k included). Both the forward cone operator and its discrete
// transpose walk rays through this single code path.
template <typename F>
inline void weighted_ray_samples(const Volume3D& vol, const std::array<double, 3>& v,
                                 const std::array<double, 3>& d, int k_weight, double step,
                                 double r_max, F&& fn) {
    double t0, t1;
    if (!clip_ray_to_volume(vol, v, d, r_max, t0, t1)) return;
    int n = static_cast<int>(std::ceil((t1 - t0) / step));
    if (n < 2) n = 2;
    const double h = (t1 - t0) / n;
    for (int i = 0; i <= n; ++i) {
        const double t = t0 + i * h;
        double w = (i == 0 || i == n) ? 0.5 * h : h;
        if (k_weight == 1)
            w *= t;
        else if (k_weight > 1)
            w *= std::pow(t, k_weight);
        fn(v[0] + t * d[0], v[1] + t * d[1], v[2] + t * d[2], w);
    }
}

} // namespace crt::detail
