#pragma once

#include "crt/forward.hpp"
#include "crt/grids.hpp"
#include "crt/vline.hpp"

#include <cstdint>
#include <vector>

namespace crt {

/// Requested output grid for the volume reconstructions.
struct VolumeGridSpec {
    int n_x = 64, n_y = 64, n_z = 64;
    double extent_xy = 1.0;
    double z_min = -1.0, z_max = 1.0;
};

/// Tabulated reduction machinery mapping cone data to V-line data. The
/// inner integrals are organized so the principal value in the cone opening
/// angle is taken pointwise per gamma node with exact discrete pole
/// subtraction (the tabulated reciprocal rows and their sums), which is what
/// keeps the contraction stable across the kernel's singular curves. The
/// reduction also needs the two boundary kernels multiplying the psi -> 0
/// and psi -> pi limits of C_k/sin(psi): the inverted field carries a 1/sqrt
/// rim factor, so its Radon data does not vanish at the endpoints and the
/// endpoint terms contribute.
struct KernelTable {
    int k_weight = 1;
    int n_gamma = 0;
    std::vector<double> beta_nodes;    // cone beta grid
    std::vector<double> psi_nodes;     // cone psi grid (uniform midpoint)
    std::vector<double> psi_out_nodes; // V-line opening angles produced
    std::vector<double> gamma_nodes;   // [g], Gauss nodes on (-pi/2, 0)
    std::vector<double> gamma_weight;  // [g], Gauss weight times sin^{k-1} cos
    std::vector<double> recip;         // [ib][jo][g][jp] = dpsi/(cos psi_jp - c)
    std::vector<double> recip_sum;     // [ib][jo][g]
    std::vector<double> pole_psi;      // [ib][jo][g], arccos(c) or -1 (no pole)
    std::vector<double> bdry0;         // [ib][jo], weight of G(beta, psi -> 0)
    std::vector<double> bdry_pi;       // [ib][jo], weight of G(beta, psi -> pi)
    double scale = 0.0;                // (-1)^{k-1} / (2 pi^2 (k-1)!)

    int n_beta() const { return static_cast<int>(beta_nodes.size()); }
    int n_psi() const { return static_cast<int>(psi_nodes.size()); }
    int n_out() const { return static_cast<int>(psi_out_nodes.size()); }
};

/// Computes the reduction tables on the given grids; k_weight must be >= 1
/// (the analytic kernel degenerates at k = 0). n_gamma controls the inner
/// gamma quadrature.
KernelTable kernel_table(int k_weight, const std::vector<double>& beta_nodes,
                         const std::vector<double>& psi_nodes,
                         const std::vector<double>& psi_out_nodes, int n_gamma = 96);

/// Pointwise value of the analytic reduction kernel H_k(beta, psi_cone,
/// psi_out): the principal-value gamma integral with the moving pole removed
/// analytically. Defined away from the singular curves; diagnostic and test
/// surface for the tabulated machinery.
double kernel_value(int k_weight, double beta, double psi_cone, double psi_out,
                    int n_gamma = 512);

/// Recovers the V-line transform of every horizontal slice f_z from weighted
/// cone data: applies d^k/dz^k and d/dpsi to C_k/sin(psi), contracts with the
/// kernel table over (beta, psi), and adds the endpoint terms. Output opening
/// angles are the table's psi_out grid. Requires at least k+2 z samples.
std::vector<VlineSinogram> vline_from_cone(const ConeData& c, const KernelTable& kt);

/// Method 1: per-slice V-line inversion of vline_from_cone output, assembled
/// on the requested volume grid (slices interpolated linearly in z).
Volume3D invert_cone_method1(const ConeData& c, const KernelTable& kt,
                             const VlineInversionConfig& vcfg, const VolumeGridSpec& grid);

/// Moment field and its resampling onto Radon geometry. For k = 1 the rows
/// hold (H R f)(a(phi,beta), .), for k = 0 (H d_s R f); derivative_order
/// records how many s-derivatives the mapped rows carry relative to R f.
struct Method2Intermediate {
    std::vector<double> moments; // [iphi][ib][iz]
    RadonData3D mapped;
    int derivative_order = 0;
    std::vector<std::uint8_t> row_covered; // [iphi][ib], 0 = central gap, filled later

    double moment_at(int iphi, int ib, int iz, int n_beta, int n_z) const {
        return moments[(static_cast<std::size_t>(iphi) * n_beta + ib) * n_z + iz];
    }
};

/// Evaluates the principal-value psi integrals reducing cone data to
/// Hilbert-transformed Radon data, then resamples z -> s = z cos(beta) -
/// sin(beta) onto a uniform s grid, completing each direction with its
/// antipodal row. k_weight must be 0 or 1; the psi grid must be symmetric
/// about pi/2.
Method2Intermediate cone_moments(const ConeData& c, int n_s = 0);

/// Method 2: cone_moments, inverse Hilbert per direction, support-tapered
/// spectral differentiation, and filtered backprojection over the direction
/// sphere. Rows whose s coverage has a central gap (near-equatorial axes with
/// a finite z aperture) are filled by interpolation across beta. n_s controls
/// the uniform Radon s grid (0 picks a default from the z count).
Volume3D invert_cone_method2(const ConeData& c, const VolumeGridSpec& grid, int n_s = 0);

/// Discrete transpose of the conical_forward quadrature (cone-surface
/// backprojection). Pairing measures: d phi dz d beta d psi on data,
/// dx dy dz on volumes, so <C_k f, g> = <f, adjoint(g)> up to rounding.
Volume3D adjoint_cone(const ConeData& g, const VolumeGridSpec& grid,
                      const ConeQuadratureSpec& q = {});

/// Direct quadrature of the combined inversion formula (second z derivative
/// of the data against the principal-value plane kernel). Verification path
/// for tiny grids; refuses more than 32^3 voxels unless allow_large.
Volume3D invert_cone_direct(const ConeData& c, const VolumeGridSpec& grid,
                            bool allow_large = false);

struct StabilityNorms {
    double sobolev_minus_1 = 0.0;
    double cone_norm = 0.0;
    double cone_norm_1 = 0.0;
    double l2 = 0.0;
};

/// Discrete surrogates of the stability functionals: ||f||_{-1} through a
/// padded 3D DFT with multiplier 1/(1+|xi|^2), and the weighted data norms
/// with |cos beta| sin beta measure (the signed measure printed in the source
/// inequality goes negative past beta = pi/2).
StabilityNorms stability_norms(const Volume3D& f, const ConeData& c);

} // namespace crt
