#include "crt/phantoms.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <stdexcept>

namespace crt {

namespace {
constexpr double kPi = std::numbers::pi;

struct SmileyGeom {
    static constexpr double face_r = 0.75;
    static constexpr double eye_x = 0.3, eye_y = 0.3, eye_r = 0.12;
    static constexpr double mouth_r0 = 0.35, mouth_r1 = 0.45;
    static constexpr double mouth_a0 = 200.0 * kPi / 180.0;
    static constexpr double mouth_a1 = 340.0 * kPi / 180.0;

    static double value(double x, double y) {
        const double r2 = x * x + y * y;
        if (r2 >= face_r * face_r) return 0.0;
        const double dl = (x + eye_x) * (x + eye_x) + (y - eye_y) * (y - eye_y);
        const double dr = (x - eye_x) * (x - eye_x) + (y - eye_y) * (y - eye_y);
        if (dl < eye_r * eye_r || dr < eye_r * eye_r) return 0.0;
        const double r = std::sqrt(r2);
        if (r > mouth_r0 && r < mouth_r1) {
            double ang = std::atan2(y, x);
            if (ang < 0) ang += 2.0 * kPi;
            if (ang > mouth_a0 && ang < mouth_a1) return 0.0;
        }
        return 1.0;
    }
};
} // namespace

Image2D phantom_smiley(int n) {
    if (n < 51) throw std::invalid_argument("phantom_smiley: n must be >= 51");
    Image2D img(n, n, 1.0);
    const double h = 2.0 / (n - 1);
    const int ss = 4;
    for (int ix = 0; ix < n; ++ix) {
        for (int iy = 0; iy < n; ++iy) {
            const double cx = img.x(ix), cy = img.y(iy);
            double acc = 0.0;
            for (int a = 0; a < ss; ++a)
                for (int b = 0; b < ss; ++b) {
                    const double ox = ((a + 0.5) / ss - 0.5) * h;
                    const double oy = ((b + 0.5) / ss - 0.5) * h;
                    acc += SmileyGeom::value(cx + ox, cy + oy);
                }
            img.at(ix, iy) = acc / (ss * ss);
        }
    }
    return img;
}

Image2D phantom_disc2d(int n, double radius, int supersample) {
    if (n < 3) throw std::invalid_argument("phantom_disc2d: n must be >= 3");
    if (!(radius > 0.0 && radius <= 1.0))
        throw std::invalid_argument("phantom_disc2d: radius must lie in (0, 1]");
    if (supersample < 1) supersample = 1;
    Image2D img(n, n, 1.0);
    const double h = 2.0 / (n - 1);
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy) {
            const double cx = img.x(ix), cy = img.y(iy);
            double acc = 0.0;
            for (int a = 0; a < supersample; ++a)
                for (int b = 0; b < supersample; ++b) {
                    const double ox = ((a + 0.5) / supersample - 0.5) * h;
                    const double oy = ((b + 0.5) / supersample - 0.5) * h;
                    acc += (cx + ox) * (cx + ox) + (cy + oy) * (cy + oy) < radius * radius ? 1.0
                                                                                          : 0.0;
                }
            img.at(ix, iy) = acc / (supersample * supersample);
        }
    return img;
}

Volume3D phantom_ball3d(int n_x, int n_y, int n_z, double extent_xy, double z_min, double z_max,
                        const double center[3], double radius, BallKind kind, int supersample) {
    Volume3D vol(n_x, n_y, n_z, extent_xy, z_min, z_max);
    if (radius <= 0.0) return vol;
    const double cr = std::hypot(center[0], center[1]);
    if (cr + radius >= extent_xy || center[2] - radius < z_min || center[2] + radius > z_max)
        throw std::invalid_argument("phantom_ball3d: ball must fit inside the cylinder");
    if (supersample < 1 || kind == BallKind::Gaussian) supersample = 1;
    const double sigma = radius / 2.0;
    const double hx = 2.0 * extent_xy / (n_x - 1);
    const double hy = 2.0 * extent_xy / (n_y - 1);
    const double hz = (z_max - z_min) / (n_z - 1);
    for (int ix = 0; ix < n_x; ++ix)
        for (int iy = 0; iy < n_y; ++iy)
            for (int iz = 0; iz < n_z; ++iz) {
                if (kind == BallKind::Gaussian) {
                    const double dx = vol.x(ix) - center[0];
                    const double dy = vol.y(iy) - center[1];
                    const double dz = vol.z(iz) - center[2];
                    vol.at(ix, iy, iz) =
                        std::exp(-(dx * dx + dy * dy + dz * dz) / (2.0 * sigma * sigma));
                    continue;
                }
                double acc = 0.0;
                for (int a = 0; a < supersample; ++a)
                    for (int b = 0; b < supersample; ++b)
                        for (int c2 = 0; c2 < supersample; ++c2) {
                            const double dx =
                                vol.x(ix) + ((a + 0.5) / supersample - 0.5) * hx - center[0];
                            const double dy =
                                vol.y(iy) + ((b + 0.5) / supersample - 0.5) * hy - center[1];
                            const double dz =
                                vol.z(iz) + ((c2 + 0.5) / supersample - 0.5) * hz - center[2];
                            acc += dx * dx + dy * dy + dz * dz < radius * radius ? 1.0 : 0.0;
                        }
                vol.at(ix, iy, iz) = acc / (supersample * supersample * supersample);
            }
    return vol;
}

void add_noise(std::vector<double>& data, double level, std::uint64_t seed) {
    if (level < 0.0) throw std::invalid_argument("add_noise: level must be >= 0");
    if (level == 0.0 || data.empty()) return;
    double peak = 0.0;
    for (double v : data) peak = std::max(peak, std::abs(v));
    const double sigma = level * peak;
    if (sigma == 0.0) return;

    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() {
        // (0, 1], safe for the log below
        return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    };
    std::size_t i = 0;
    while (i < data.size()) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        data[i++] += sigma * mag * std::cos(2.0 * kPi * u2);
        if (i < data.size()) data[i++] += sigma * mag * std::sin(2.0 * kPi * u2);
    }
}

void add_noise(Image2D& img, double level, std::uint64_t seed) { add_noise(img.values, level, seed); }
void add_noise(Volume3D& vol, double level, std::uint64_t seed) { add_noise(vol.values, level, seed); }
void add_noise(VlineSinogram& s, double level, std::uint64_t seed) { add_noise(s.data, level, seed); }
void add_noise(ConeData& c, double level, std::uint64_t seed) { add_noise(c.data, level, seed); }

std::vector<std::uint8_t> smiley_jump_mask(int n, double band) {
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(n) * n, 0);
    auto near_circle = [band](double r, double rc) { return std::abs(r - rc) <= band; };
    for (int ix = 0; ix < n; ++ix) {
        const double x = -1.0 + ix * (2.0 / (n - 1));
        for (int iy = 0; iy < n; ++iy) {
            const double y = -1.0 + iy * (2.0 / (n - 1));
            const double r = std::hypot(x, y);
            bool hit = near_circle(r, SmileyGeom::face_r);
            if (!hit) {
                const double dl = std::hypot(x + SmileyGeom::eye_x, y - SmileyGeom::eye_y);
                const double dr = std::hypot(x - SmileyGeom::eye_x, y - SmileyGeom::eye_y);
                hit = near_circle(dl, SmileyGeom::eye_r) || near_circle(dr, SmileyGeom::eye_r);
            }
            if (!hit) {
                double ang = std::atan2(y, x);
                if (ang < 0) ang += 2.0 * kPi;
                const bool in_sector =
                    ang >= SmileyGeom::mouth_a0 && ang <= SmileyGeom::mouth_a1;
                if (in_sector)
                    hit = near_circle(r, SmileyGeom::mouth_r0) ||
                          near_circle(r, SmileyGeom::mouth_r1);
                if (!hit) {
                    // the radial segments closing the mouth arc
                    for (double a : {SmileyGeom::mouth_a0, SmileyGeom::mouth_a1}) {
                        const double ux = std::cos(a), uy = std::sin(a);
                        const double t = std::clamp(x * ux + y * uy, SmileyGeom::mouth_r0,
                                                    SmileyGeom::mouth_r1);
                        if (std::hypot(x - t * ux, y - t * uy) <= band) hit = true;
                    }
                }
            }
            if (hit) mask[static_cast<std::size_t>(ix) * n + iy] = 1;
        }
    }
    return mask;
}

double masked_rel_l2(const std::vector<double>& approx, const std::vector<double>& exact,
                     const std::vector<std::uint8_t>& mask) {
    if (approx.size() != exact.size() || approx.size() != mask.size())
        throw std::invalid_argument("masked_rel_l2: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < approx.size(); ++i) {
        if (mask[i]) continue;
        const double d = approx[i] - exact[i];
        num += d * d;
        den += exact[i] * exact[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

std::uint64_t fnv1a_hash(const std::vector<double>& values) {
    std::uint64_t h = 1469598103934665603ull;
    for (double v : values) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xff;
            h *= 1099511628211ull;
        }
    }
    return h;
}

} // namespace crt
