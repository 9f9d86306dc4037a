#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace crt::fft {

using cvec = std::vector<std::complex<double>>;

/// In-place complex FFT, length must be a power of two.
/// sign = -1 forward (e^{-i...}), +1 inverse without the 1/N factor.
void transform_pow2(cvec& a, int sign);

/// Forward DFT of arbitrary length done directly: X[k] = sum_j x[j] e^{-2pi i jk/N}.
/// Used for angular analysis at non power-of-two sample counts.
cvec dft_direct(const cvec& x);

std::size_t next_pow2(std::size_t n);

} // namespace crt::fft
