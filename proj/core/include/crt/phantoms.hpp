#pragma once

#include "crt/grids.hpp"

#include <cstdint>

namespace crt {

/// Smiley test phantom on an n x n grid over [-1,1]^2: face disc of radius
/// 0.75 (value 1) with two eye discs at (+-0.3, 0.3), radius 0.12, and an
/// annular mouth arc r in [0.35, 0.45], angle in [200 deg, 340 deg], both
/// punched out. Edges are rasterized with 4x4 coverage supersampling.
/// Requires n >= 51.
Image2D phantom_smiley(int n);

/// Centered disc indicator of the given radius (up to the full unit disc),
/// supersampled for smooth ray-quadrature behavior.
Image2D phantom_disc2d(int n, double radius, int supersample = 8);

enum class BallKind { Indicator, Gaussian };

/// Ball phantom inside a cylinder; Gaussian uses exp(-|x-c|^2/(2 sigma^2))
/// with sigma = radius/2. Indicator edges can be rasterized with coverage
/// supersampling. A non-positive radius yields the zero volume. Throws when
/// the ball pokes outside the cylinder or z range.
Volume3D phantom_ball3d(int n_x, int n_y, int n_z, double extent_xy, double z_min, double z_max,
                        const double center[3], double radius, BallKind kind, int supersample = 1);

/// Additive Gaussian noise with standard deviation level * max|data| from a
/// seeded deterministic generator (explicit Box-Muller on mt19937_64, so the
/// byte stream does not depend on the standard library).
void add_noise(std::vector<double>& data, double level, std::uint64_t seed);
void add_noise(Image2D& img, double level, std::uint64_t seed);
void add_noise(Volume3D& vol, double level, std::uint64_t seed);
void add_noise(VlineSinogram& s, double level, std::uint64_t seed);
void add_noise(ConeData& c, double level, std::uint64_t seed);

/// Marks pixels of the n x n grid within `band` of a smiley discontinuity
/// (1 = masked). Used to exclude jump neighborhoods from error metrics.
std::vector<std::uint8_t> smiley_jump_mask(int n, double band);

/// Relative L2 error over the unmasked entries only.
double masked_rel_l2(const std::vector<double>& approx, const std::vector<double>& exact,
                     const std::vector<std::uint8_t>& mask);

/// FNV-1a hash of the raw little-endian bytes, for regression pinning.
std::uint64_t fnv1a_hash(const std::vector<double>& values);

} // namespace crt
