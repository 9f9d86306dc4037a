#pragma once

#include <vector>

namespace crt {

enum class ChebKind { FirstKind, SecondKind };

/// Which Chebyshev family and order an evaluation refers to. Order -1 is
/// admitted for the second kind only (U_{-1} = 0).
struct ChebBranchSpec {
    ChebKind kind = ChebKind::FirstKind;
    int order = 0;

    bool valid() const {
        if (order < -1) return false;
        if (order == -1) return kind == ChebKind::SecondKind;
        return true;
    }
};

/// Chebyshev polynomial of the first kind, evaluated by the branch formulas
/// cos/cosh/arccosh so the hyperbolic region |z| > 1 stays exact. Arguments
/// within 1e-8 of +-1 snap to the limit values.
double cheb_T(int k, double z);

/// Chebyshev polynomial of the second kind; k >= -1 with U_{-1} = 0.
/// Removable singularities at z = +-1 give U_k(1) = k+1, U_k(-1) = (-1)^k (k+1).
double cheb_U(int k, double z);

/// Discrete Hilbert transform of samples on a uniform grid:
///   (H g)(s) = (1/pi) PV Int g(t)/(s - t) dt.
/// Spectral realization: zero-pad to pad_factor * n rounded to a power of two,
/// multiply DFT bins by -i sign(freq), transform back. Input should decay to
/// ~0 at both ends of the grid. Throws for fewer than 8 samples.
std::vector<double> hilbert_uniform(const std::vector<double>& g, int pad_factor = 16);

} // namespace crt
