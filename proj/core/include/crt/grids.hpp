#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace crt {

/// Emission density sampled on a node-centered Cartesian grid over
/// [-extent, extent]^2. x(i) = -extent + i * 2 extent/(n_x-1).
struct Image2D {
    int n_x = 0;
    int n_y = 0;
    double extent = 1.0;
    std::vector<double> values; // row-major, index ix * n_y + iy

    Image2D() = default;
    Image2D(int nx, int ny, double ext = 1.0);

    double& at(int ix, int iy) { return values[static_cast<std::size_t>(ix) * n_y + iy]; }
    double at(int ix, int iy) const { return values[static_cast<std::size_t>(ix) * n_y + iy]; }
    double x(int ix) const { return -extent + ix * (2.0 * extent / (n_x - 1)); }
    double y(int iy) const { return -extent + iy * (2.0 * extent / (n_y - 1)); }

    /// Bilinear sample at (x, y); zero outside the grid.
    double sample(double x, double y) const;
};

/// Emission density on a node-centered 3D grid, xy over
/// [-extent_xy, extent_xy]^2 and z over [z_min, z_max].
struct Volume3D {
    int n_x = 0, n_y = 0, n_z = 0;
    double extent_xy = 1.0;
    double z_min = -1.0, z_max = 1.0;
    std::vector<double> values; // index (ix * n_y + iy) * n_z + iz

    Volume3D() = default;
    Volume3D(int nx, int ny, int nz, double ext_xy, double zmin, double zmax);

    double& at(int ix, int iy, int iz) {
        return values[(static_cast<std::size_t>(ix) * n_y + iy) * n_z + iz];
    }
    double at(int ix, int iy, int iz) const {
        return values[(static_cast<std::size_t>(ix) * n_y + iy) * n_z + iz];
    }
    double x(int i) const { return -extent_xy + i * (2.0 * extent_xy / (n_x - 1)); }
    double y(int i) const { return -extent_xy + i * (2.0 * extent_xy / (n_y - 1)); }
    double z(int i) const { return z_min + i * ((z_max - z_min) / (n_z - 1)); }

    /// Trilinear sample; zero outside the grid.
    double sample(double x, double y, double z) const;
};

/// Angular Fourier coefficients F_n(r_i) of a planar function on the radial
/// grid r_i = i/m. Orders run symmetrically over n in [-n_max, n_max] so the
/// conjugate symmetry of real functions is representable exactly; the
/// outermost radius r_m = 1 is kept at zero (support inside the unit disc).
struct PolarCoefficients {
    int n_max = 0;
    int m = 0;
    std::vector<std::complex<double>> coeffs; // index (n + n_max) * (m+1) + i

    PolarCoefficients() = default;
    PolarCoefficients(int nmax, int m_);

    std::complex<double>& at(int n, int i) {
        return coeffs[static_cast<std::size_t>(n + n_max) * (m + 1) + i];
    }
    std::complex<double> at(int n, int i) const {
        return coeffs[static_cast<std::size_t>(n + n_max) * (m + 1) + i];
    }
    double radius(int i) const { return static_cast<double>(i) / m; }
};

/// Samples of the V-line transform over vertex angles phi_k = 2 pi k/n_phi
/// and half opening angles psi (strictly inside (0, pi/2)).
struct VlineSinogram {
    int n_phi = 0;
    std::vector<double> psi_nodes;
    std::vector<double> data; // index k * n_psi + j

    VlineSinogram() = default;
    VlineSinogram(int nphi, std::vector<double> psis);

    int n_psi() const { return static_cast<int>(psi_nodes.size()); }
    double phi(int k) const;
    double& at(int k, int j) { return data[static_cast<std::size_t>(k) * psi_nodes.size() + j]; }
    double at(int k, int j) const { return data[static_cast<std::size_t>(k) * psi_nodes.size() + j]; }

    /// Canonical inversion grid: psi_j = arcsin(s_j) with s_j = (j+1)/(n+1),
    /// uniform in s = sin(psi) and strictly inside (0, pi/2).
    static std::vector<double> arcsin_grid(int n);
};

/// Weighted conical Radon data over (phi, z, beta, psi). z is uniform;
/// beta and psi grids stay strictly inside (0, pi).
struct ConeData {
    int k_weight = 0;
    int n_phi = 0;
    std::vector<double> z_nodes;
    std::vector<double> beta_nodes;
    std::vector<double> psi_nodes;
    std::vector<double> data; // index ((iphi * n_z + iz) * n_beta + ib) * n_psi + jp

    ConeData() = default;
    ConeData(int k, int nphi, std::vector<double> zs, std::vector<double> betas,
             std::vector<double> psis);

    int n_z() const { return static_cast<int>(z_nodes.size()); }
    int n_beta() const { return static_cast<int>(beta_nodes.size()); }
    int n_psi() const { return static_cast<int>(psi_nodes.size()); }
    double phi(int k) const;
    double dz() const { return z_nodes.size() > 1 ? z_nodes[1] - z_nodes[0] : 0.0; }

    std::size_t index(int iphi, int iz, int ib, int jp) const {
        return ((static_cast<std::size_t>(iphi) * z_nodes.size() + iz) * beta_nodes.size() + ib) *
                   psi_nodes.size() + jp;
    }
    double& at(int iphi, int iz, int ib, int jp) { return data[index(iphi, iz, ib, jp)]; }
    double at(int iphi, int iz, int ib, int jp) const { return data[index(iphi, iz, ib, jp)]; }

    /// Midpoint grid over (0, pi): x_j = pi (j + 1/2)/n, symmetric about pi/2.
    static std::vector<double> midpoint_grid(int n);
    /// Uniform z grid with n nodes covering [z0, z1] inclusive.
    static std::vector<double> uniform_z(int n, double z0, double z1);
};

/// Samples of the 3D Radon transform on directions omega = a(phi, beta)
/// matching a ConeData grid, with a uniform s grid.
struct RadonData3D {
    int n_phi = 0;
    std::vector<double> beta_nodes;
    std::vector<double> s_nodes;
    std::vector<double> data; // index (iphi * n_beta + ib) * n_s + is

    RadonData3D() = default;
    RadonData3D(int nphi, std::vector<double> betas, std::vector<double> ss);

    int n_beta() const { return static_cast<int>(beta_nodes.size()); }
    int n_s() const { return static_cast<int>(s_nodes.size()); }
    double ds() const { return s_nodes.size() > 1 ? s_nodes[1] - s_nodes[0] : 0.0; }
    double& at(int iphi, int ib, int is) {
        return data[(static_cast<std::size_t>(iphi) * beta_nodes.size() + ib) * s_nodes.size() + is];
    }
    double at(int iphi, int ib, int is) const {
        return data[(static_cast<std::size_t>(iphi) * beta_nodes.size() + ib) * s_nodes.size() + is];
    }
};

/// Synthesize a Cartesian image from angular Fourier coefficients on
/// [-1, 1]^2: F(r theta(phi)) = sum_n F_n(r) e^{i n phi}, radial interpolation
/// linear between the r_i, zero outside the unit disc. Rejects n_x < 3.
Image2D polar_to_cartesian(const PolarCoefficients& p, int n_x);

/// Angular analysis of an image supported in the unit disc: samples rings
/// r_i = i/m at >= 2 n_max uniform angles (bilinear) and takes the discrete
/// angular Fourier transform with the 1/(2 pi) convention absorbed into the
/// 1/n_samples normalization. Rejects n_max < 1 or m < 1.
PolarCoefficients cartesian_to_polar(const Image2D& img, int n_max, int m);

// small shared helpers
double l2_norm(const std::vector<double>& v);
double rel_l2_error(const std::vector<double>& approx, const std::vector<double>& exact);

} // namespace crt
