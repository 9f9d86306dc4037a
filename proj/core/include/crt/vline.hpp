#pragma once

#include "crt/grids.hpp"

#include <complex>
#include <string>
#include <vector>

namespace crt {

enum class VlineVariant { PerryStable, CormackExterior };

struct VlineInversionConfig {
    double epsilon = 0.005; // 0.005 for clean data, 0.05 for 5% noise
    int n_max = 0;          // 0: use n_phi/2 - 1
    int m = 0;              // 0: use the sinogram's natural radial count
    VlineVariant variant = VlineVariant::PerryStable;
};

/// Angular Fourier coefficients of sinogram-shaped data, orders
/// n in [-n_max, n_max], sampled at s_j = sin(psi_j).
struct HarmonicCoeffs {
    int n_max = 0;
    std::vector<double> s_nodes;
    std::vector<std::complex<double>> v; // index (n + n_max) * n_s + j

    HarmonicCoeffs() = default;
    HarmonicCoeffs(int nmax, std::vector<double> ss);

    int n_s() const { return static_cast<int>(s_nodes.size()); }
    std::complex<double>& at(int n, int j) {
        return v[static_cast<std::size_t>(n + n_max) * s_nodes.size() + j];
    }
    std::complex<double> at(int n, int j) const {
        return v[static_cast<std::size_t>(n + n_max) * s_nodes.size() + j];
    }
};

/// Returns the radial cell count M of the canonical arcsine grid
/// (sin psi_j = (j+1)/M uniformly); throws if the grid is not of that form.
int canonical_radial_count(const std::vector<double>& psi_nodes);

/// Step 1: G[n, j] ~= (V F)_n(psi_j) with the 1/(2 pi) convention realized
/// as a 1/n_phi discrete angular transform. Requires n_phi >= 2 n_max.
HarmonicCoeffs sinogram_coeffs(const VlineSinogram& s, int n_max);

/// Step 2 for V-line data: regularized division
/// H[n,j] = cos(n(psi_j - pi/2)) G[n,j] / (eps^2 + cos^2(n(psi_j - pi/2))),
/// which approximates twice the Radon coefficient (R F)_n(sin psi_j).
HarmonicCoeffs regularized_radon_coeffs(const HarmonicCoeffs& G, const VlineInversionConfig& cfg);

/// Step 2 for X-ray data: exact exponential division, no regularization,
/// rescaled to the same "twice the Radon coefficient" convention.
HarmonicCoeffs xray_radon_coeffs(const HarmonicCoeffs& G);

/// One cell weight w^(n)_{i,j} of the stable radial back-substitution on the
/// shared grid r = index/m: for j < i the integral of U_{|n|-1}(s/r_i)/r_i
/// over [r_j, r_{j+1}], for j >= i the exterior [s/r + sqrt(...)]^{-|n|}
/// kernel integral. Requires 1 <= i <= m, 0 <= j <= m-1.
double perry_weight(int n, int i, int j, int m);

/// Step 3: recover F_n(r_i) from H by per-cell exact kernel integration.
/// Input H follows the regularized_radon_coeffs convention (twice the Radon
/// coefficients on the canonical arcsine grid).
PolarCoefficients radial_solve(const HarmonicCoeffs& H, const VlineInversionConfig& cfg);

/// Full pipeline (Algorithm steps 1-4). n_out = 0 picks m+1 output pixels.
Image2D invert_vline(const VlineSinogram& s, const VlineInversionConfig& cfg, int n_out = 0);

/// Same pipeline driven by X-ray data (exponential division, no epsilon).
Image2D invert_xray(const VlineSinogram& s, const VlineInversionConfig& cfg, int n_out = 0);

struct ExteriorResult {
    PolarCoefficients coeffs;
    std::string diagnostic; // always set: this variant is severely ill-posed
};

/// Exterior (Cormack-form) variant: reconstructs F_n(r) from data at s >= r
/// only. Diagnostic use; exponentially unstable in the order n.
ExteriorResult invert_vline_exterior(const VlineSinogram& s, const VlineInversionConfig& cfg);

} // namespace crt
