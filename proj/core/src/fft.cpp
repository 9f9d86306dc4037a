#include "crt/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace crt::fft {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void transform_pow2(cvec& a, int sign) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("transform_pow2: length must be a power of two");

    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

cvec dft_direct(const cvec& x) {
    const std::size_t n = x.size();
    cvec out(n);
    const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        // incremental twiddle: w = e^{-2pi i k/n}
        std::complex<double> w(std::cos(step * static_cast<double>(k)),
                               std::sin(step * static_cast<double>(k)));
        std::complex<double> cur(1.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            acc += x[j] * cur;
            cur *= w;
        }
        out[k] = acc;
    }
    return out;
}

} // namespace crt::fft
