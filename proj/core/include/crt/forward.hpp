#pragma once

#include "crt/grids.hpp"

#include <array>

namespace crt {

/// Arc-length stepping for ray integrals (composite trapezoidal rule).
/// r_max <= 0 means no truncation beyond the support clip, which is always
/// finite for rays leaving the grid.
struct RayQuadratureSpec {
    double step = 1e-3;
    double r_max = 0.0;
};

/// Discretization of the cone surface integral: n_eta azimuthal nodes around
/// the axis, radial step step_r, rays truncated at r_max.
struct ConeQuadratureSpec {
    int n_eta = 256;
    double step_r = 1e-3;
    double r_max = 0.0; // <= 0: support clip only
};

/// Cone axis a(phi, beta) = (-theta(phi) sin beta, cos beta), unit length.
std::array<double, 3> axis_vector(double phi, double beta);

/// One-sided ray integral int_0^inf img(vertex + r * direction) dr.
/// direction must be unit to 1e-6; exact zero when the ray misses the
/// support disc.
double xray_2d(const Image2D& img, std::array<double, 2> vertex,
               std::array<double, 2> direction, const RayQuadratureSpec& q = {});

/// Full-line integral over the line with normal (cos alpha, sin alpha) at
/// signed offset s; zero for |s| >= extent.
double radon_2d(const Image2D& img, double alpha, double s, const RayQuadratureSpec& q = {});

/// V-line transform on the circle: data[k, j] = sum_{sigma=+-1}
/// xray_2d(img, theta(phi_k), -theta(phi_k - sigma psi_j)).
VlineSinogram vline_forward(const Image2D& img, int n_phi, const std::vector<double>& psi_nodes,
                            const RayQuadratureSpec& q = {});

/// X-ray transform sampled on the same (phi, psi) layout (one branch only).
VlineSinogram xray_forward(const Image2D& img, int n_phi, const std::vector<double>& psi_nodes,
                           const RayQuadratureSpec& q = {});

/// Weighted conical Radon transform of a volume on the requested grids:
/// data = sin(psi) * sum_eta sum_r f(vertex + r omega(eta)) r^k dr deta with
/// omega(eta) = cos psi a + sin psi (cos eta u1 + sin eta u2) and the
/// deterministic horizontal frame u1 = (theta(phi)^perp, 0).
ConeData conical_forward(const Volume3D& vol, int k_weight, int n_phi,
                         const std::vector<double>& z_nodes, const std::vector<double>& beta_nodes,
                         const std::vector<double>& psi_nodes, const ConeQuadratureSpec& q = {});

/// Plane integral of a volume over {x : <omega, x> = s} by 2D trapezoidal
/// quadrature on an orthonormal frame of omega^perp; omega must be unit.
double radon_3d(const Volume3D& vol, std::array<double, 3> omega, double s,
                const RayQuadratureSpec& q = {});

/// Weighted one-sided ray integral int_0^inf f(vertex + r u) r^k dr in the
/// ray parameter r (u need not be unit, so the homogeneity
/// X_k(lambda u) = lambda^{-k-1} X_k(u) is observable). Building block of the
/// cone quadrature, exposed for tests.
double xray_3d_weighted(const Volume3D& vol, std::array<double, 3> vertex,
                        std::array<double, 3> direction, int k_weight,
                        const RayQuadratureSpec& q = {});

} // namespace crt
