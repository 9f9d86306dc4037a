#include "crt/special.hpp"

#include "crt/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace crt {

namespace {
constexpr double kSnap = 1e-8;
}

double cheb_T(int k, double z) {
    if (k < 0) throw std::invalid_argument("cheb_T: order must be >= 0");
    if (std::abs(z - 1.0) < kSnap) return 1.0;
    if (std::abs(z + 1.0) < kSnap) return (k % 2 == 0) ? 1.0 : -1.0;
    if (z > 1.0) return std::cosh(k * std::acosh(z));
    if (z < -1.0) {
        double v = std::cosh(k * std::acosh(-z));
        return (k % 2 == 0) ? v : -v;
    }
    return std::cos(k * std::acos(z));
}

double cheb_U(int k, double z) {
    if (k < -1) throw std::invalid_argument("cheb_U: order must be >= -1");
    if (k == -1) return 0.0;
    if (std::abs(z - 1.0) < kSnap) return static_cast<double>(k + 1);
    if (std::abs(z + 1.0) < kSnap) {
        double v = static_cast<double>(k + 1);
        return (k % 2 == 0) ? v : -v;
    }
    if (z > 1.0) {
        double t = std::acosh(z);
        return std::sinh((k + 1) * t) / std::sinh(t);
    }
    if (z < -1.0) {
        double t = std::acosh(-z);
        double v = std::sinh((k + 1) * t) / std::sinh(t);
        return (k % 2 == 0) ? v : -v;
    }
    double t = std::acos(z);
    return std::sin((k + 1) * t) / std::sin(t);
}

std::vector<double> hilbert_uniform(const std::vector<double>& g, int pad_factor) {
    const std::size_t n = g.size();
    if (n < 8) throw std::invalid_argument("hilbert_uniform: need at least 8 samples");
    if (pad_factor < 2) pad_factor = 2;

    const std::size_t L = fft::next_pow2(n * static_cast<std::size_t>(pad_factor));
    fft::cvec a(L, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) a[i] = {g[i], 0.0};
    fft::transform_pow2(a, -1);
    // multiplier -i sign(freq); bins 0 and L/2 are zeroed
    a[0] = 0.0;
    a[L / 2] = 0.0;
    const std::complex<double> mneg(0.0, -1.0), mpos(0.0, 1.0);
    for (std::size_t q = 1; q < L / 2; ++q) a[q] *= mneg;
    for (std::size_t q = L / 2 + 1; q < L; ++q) a[q] *= mpos;
    fft::transform_pow2(a, +1);
    std::vector<double> out(n);
    const double inv = 1.0 / static_cast<double>(L);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i].real() * inv;
    return out;
}

} // namespace crt
