#include "crt/forward.hpp"

#include "crt/detail/ray.hpp"
#include "crt/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace crt {

namespace {
constexpr double kPi = std::numbers::pi;

// Intersection of the ray p + t d (t >= 0) with the disc x^2 + y^2 <= R^2;
// returns false when the ray misses.
bool ray_disc_interval(double px, double py, double dx, double dy, double R, double& t0,
                       double& t1) {
    const double b = px * dx + py * dy;
    const double c = px * px + py * py - R * R;
    const double disc = b * b - c;
    if (disc <= 0.0) return false;
    const double rt = std::sqrt(disc);
    t0 = -b - rt;
    t1 = -b + rt;
    if (t1 <= 0.0) return false;
    t0 = std::max(t0, 0.0);
    return t1 > t0;
}

// Trapezoid over [t0, t1] with step <= target_step of fn(t).
template <typename F>
double trapezoid(double t0, double t1, double target_step, F&& fn) {
    if (!(t1 > t0)) return 0.0;
    int n = static_cast<int>(std::ceil((t1 - t0) / target_step));
    if (n < 2) n = 2;
    const double h = (t1 - t0) / n;
    double acc = 0.5 * (fn(t0) + fn(t1));
    for (int i = 1; i < n; ++i) acc += fn(t0 + i * h);
    return acc * h;
}
} // namespace

std::array<double, 3> axis_vector(double phi, double beta) {
    return {-std::cos(phi) * std::sin(beta), -std::sin(phi) * std::sin(beta), std::cos(beta)};
}

double xray_2d(const Image2D& img, std::array<double, 2> vertex, std::array<double, 2> direction,
               const RayQuadratureSpec& q) {
    const double nrm = std::hypot(direction[0], direction[1]);
    if (std::abs(nrm - 1.0) > 1e-6)
        throw std::invalid_argument("xray_2d: direction must be a unit vector");
    double t0, t1;
    // support lives in the disc of radius extent; sqrt(2)*extent covers corners
    const double R = img.extent * std::numbers::sqrt2;
    if (!ray_disc_interval(vertex[0], vertex[1], direction[0], direction[1], R, t0, t1)) return 0.0;
    if (q.r_max > 0.0) t1 = std::min(t1, q.r_max);
    if (!(t1 > t0)) return 0.0;
    return trapezoid(t0, t1, q.step, [&](double t) {
        return img.sample(vertex[0] + t * direction[0], vertex[1] + t * direction[1]);
    });
}

double radon_2d(const Image2D& img, double alpha, double s, const RayQuadratureSpec& q) {
    if (std::abs(s) >= img.extent) return 0.0;
    const double nx = std::cos(alpha), ny = std::sin(alpha);
    const double px = s * nx, py = s * ny;
    const double R = img.extent * std::numbers::sqrt2;
    const double half = std::sqrt(std::max(R * R - s * s, 0.0));
    return trapezoid(-half, half, q.step, [&](double t) {
        return img.sample(px - t * ny, py + t * nx);
    });
}

VlineSinogram vline_forward(const Image2D& img, int n_phi, const std::vector<double>& psi_nodes,
                            const RayQuadratureSpec& q) {
    VlineSinogram sino(n_phi, psi_nodes);
    const int npsi = sino.n_psi();
    parallel_for(static_cast<std::size_t>(n_phi), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const double phi = sino.phi(static_cast<int>(k));
            const std::array<double, 2> vertex{std::cos(phi), std::sin(phi)};
            for (int j = 0; j < npsi; ++j) {
                double acc = 0.0;
                for (int sigma : {+1, -1}) {
                    const double ang = phi - sigma * psi_nodes[j];
                    acc += xray_2d(img, vertex, {-std::cos(ang), -std::sin(ang)}, q);
                }
                sino.at(static_cast<int>(k), j) = acc;
            }
        }
    });
    return sino;
}

VlineSinogram xray_forward(const Image2D& img, int n_phi, const std::vector<double>& psi_nodes,
                           const RayQuadratureSpec& q) {
    VlineSinogram sino(n_phi, psi_nodes);
    const int npsi = sino.n_psi();
    parallel_for(static_cast<std::size_t>(n_phi), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const double phi = sino.phi(static_cast<int>(k));
            const std::array<double, 2> vertex{std::cos(phi), std::sin(phi)};
            for (int j = 0; j < npsi; ++j) {
                const double ang = phi - psi_nodes[j];
                sino.at(static_cast<int>(k), j) =
                    xray_2d(img, vertex, {-std::cos(ang), -std::sin(ang)}, q);
            }
        }
    });
    return sino;
}

double xray_3d_weighted(const Volume3D& vol, std::array<double, 3> vertex,
                        std::array<double, 3> direction, int k_weight,
                        const RayQuadratureSpec& q) {
    if (k_weight < 0) throw std::invalid_argument("xray_3d_weighted: k must be >= 0");
    // the direction need not be unit: the integral runs in the ray parameter,
    // which is what makes the homogeneity in the direction argument testable
    double acc = 0.0;
    detail::weighted_ray_samples(vol, vertex, direction, k_weight, q.step, q.r_max,
                                 [&](double x, double y, double z, double w) {
                                     acc += w * vol.sample(x, y, z);
                                 });
    return acc;
}

ConeData conical_forward(const Volume3D& vol, int k_weight, int n_phi,
                         const std::vector<double>& z_nodes, const std::vector<double>& beta_nodes,
                         const std::vector<double>& psi_nodes, const ConeQuadratureSpec& q) {
    if (k_weight < 0) throw std::invalid_argument("conical_forward: k_weight must be >= 0");
    if (q.n_eta < 16) throw std::invalid_argument("conical_forward: n_eta must be >= 16");
    ConeData cone(k_weight, n_phi, z_nodes, beta_nodes, psi_nodes);
    const int nz = cone.n_z(), nb = cone.n_beta(), np = cone.n_psi();

    // bounding sphere of the nonzero voxels, for pruning cones that miss it
    double cx = 0.0, cy = 0.0, cz = 0.0, rad = 0.0;
    {
        double xmin = 1e30, xmax = -1e30, ymin = 1e30, ymax = -1e30, zmin = 1e30, zmax = -1e30;
        bool any = false;
        for (int ix = 0; ix < vol.n_x; ++ix)
            for (int iy = 0; iy < vol.n_y; ++iy)
                for (int iz = 0; iz < vol.n_z; ++iz)
                    if (vol.at(ix, iy, iz) != 0.0) {
                        any = true;
                        xmin = std::min(xmin, vol.x(ix));
                        xmax = std::max(xmax, vol.x(ix));
                        ymin = std::min(ymin, vol.y(iy));
                        ymax = std::max(ymax, vol.y(iy));
                        zmin = std::min(zmin, vol.z(iz));
                        zmax = std::max(zmax, vol.z(iz));
                    }
        if (!any) return cone;
        cx = 0.5 * (xmin + xmax);
        cy = 0.5 * (ymin + ymax);
        cz = 0.5 * (zmin + zmax);
        const double hx = vol.x(1) - vol.x(0);
        rad = 0.5 * std::hypot(xmax - xmin, std::hypot(ymax - ymin, zmax - zmin)) + 2.0 * hx;
    }

    const double deta = 2.0 * kPi / q.n_eta;
    std::vector<double> cos_eta(q.n_eta), sin_eta(q.n_eta);
    for (int t = 0; t < q.n_eta; ++t) {
        cos_eta[t] = std::cos(t * deta);
        sin_eta[t] = std::sin(t * deta);
    }

    parallel_for(static_cast<std::size_t>(n_phi) * nz, [&](std::size_t b, std::size_t e) {
        RayQuadratureSpec rq{q.step_r, q.r_max};
        for (std::size_t vtx = b; vtx < e; ++vtx) {
            const int iphi = static_cast<int>(vtx) / nz;
            const int iz = static_cast<int>(vtx) % nz;
            const double phi = cone.phi(iphi);
            const std::array<double, 3> v{std::cos(phi), std::sin(phi), z_nodes[iz]};
            const std::array<double, 3> u1{-std::sin(phi), std::cos(phi), 0.0};
            // vertex -> support center geometry for pruning
            const double ux = cx - v[0], uy = cy - v[1], uz = cz - v[2];
            const double d = std::sqrt(ux * ux + uy * uy + uz * uz);
            for (int ib = 0; ib < nb; ++ib) {
                const double beta = beta_nodes[ib];
                const std::array<double, 3> ax = axis_vector(phi, beta);
                const std::array<double, 3> u2{ax[1] * u1[2] - ax[2] * u1[1],
                                               ax[2] * u1[0] - ax[0] * u1[2],
                                               ax[0] * u1[1] - ax[1] * u1[0]};
                // angle between the axis and the direction to the support center
                double ca = 0.0;
                if (d > 1e-12) ca = (ux * ax[0] + uy * ax[1] + uz * ax[2]) / d;
                const double alpha = std::acos(std::clamp(ca, -1.0, 1.0));
                const double margin = d > rad ? std::asin(std::clamp(rad / d, 0.0, 1.0)) : kPi;
                for (int jp = 0; jp < np; ++jp) {
                    const double psi = psi_nodes[jp];
                    // every surface ray keeps angle psi to the axis: the cone
                    // misses the support sphere when |alpha - psi| > margin
                    if (d > rad && std::abs(alpha - psi) > margin) {
                        cone.at(iphi, iz, ib, jp) = 0.0;
                        continue;
                    }
                    const double cp = std::cos(psi), sp = std::sin(psi);
                    double acc = 0.0;
                    for (int t = 0; t < q.n_eta; ++t) {
                        const std::array<double, 3> w{
                            cp * ax[0] + sp * (cos_eta[t] * u1[0] + sin_eta[t] * u2[0]),
                            cp * ax[1] + sp * (cos_eta[t] * u1[1] + sin_eta[t] * u2[1]),
                            cp * ax[2] + sp * (cos_eta[t] * u1[2] + sin_eta[t] * u2[2])};
                        acc += xray_3d_weighted(vol, v, w, k_weight, rq);
                    }
                    cone.at(iphi, iz, ib, jp) = sp * acc * deta;
                }
            }
        }
    });
    return cone;
}

double radon_3d(const Volume3D& vol, std::array<double, 3> omega, double s,
                const RayQuadratureSpec& q) {
    const double nrm =
        std::sqrt(omega[0] * omega[0] + omega[1] * omega[1] + omega[2] * omega[2]);
    if (std::abs(nrm - 1.0) > 1e-6)
        throw std::invalid_argument("radon_3d: omega must be a unit vector");
    const double zr = std::max(std::abs(vol.z_min), std::abs(vol.z_max));
    const double Rb = std::sqrt(vol.extent_xy * vol.extent_xy * 2.0 + zr * zr);
    if (std::abs(s) >= Rb) return 0.0;
    // deterministic frame of omega^perp
    std::array<double, 3> e1;
    const double hxy = std::hypot(omega[0], omega[1]);
    if (hxy > 1e-12)
        e1 = {-omega[1] / hxy, omega[0] / hxy, 0.0};
    else
        e1 = {1.0, 0.0, 0.0};
    const std::array<double, 3> e2{omega[1] * e1[2] - omega[2] * e1[1],
                                   omega[2] * e1[0] - omega[0] * e1[2],
                                   omega[0] * e1[1] - omega[1] * e1[0]};
    const double rho = std::sqrt(std::max(Rb * Rb - s * s, 0.0));
    int n = static_cast<int>(std::ceil(2.0 * rho / q.step));
    if (n < 2) n = 2;
    const double h = 2.0 * rho / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double u = -rho + i * h;
        const double wu = (i == 0 || i == n) ? 0.5 : 1.0;
        double row = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double w = -rho + j * h;
            const double ww = (j == 0 || j == n) ? 0.5 : 1.0;
            row += ww * vol.sample(s * omega[0] + u * e1[0] + w * e2[0],
                                   s * omega[1] + u * e1[1] + w * e2[1],
                                   s * omega[2] + u * e1[2] + w * e2[2]);
        }
        acc += wu * row;
    }
    return acc * h * h;
}

} // namespace crt
