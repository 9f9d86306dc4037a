#include "crt/vline.hpp"

#include "crt/fft.hpp"
#include "crt/parallel.hpp"
#include "crt/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace crt {

namespace {
constexpr double kPi = std::numbers::pi;
// Overall scale of the radial back-substitution, calibrated once against the
// disc-indicator closed form and pinned by the unit tests.
constexpr double kCNorm = 1.0;

double safe_acosh(double z) { return z <= 1.0 ? 0.0 : std::acosh(z); }

// g'[c] per cell from the extended H row (values are twice the Radon
// coefficients): g' = c_norm * (M/2) * (H[c+1] - H[c]).
std::vector<std::complex<double>> cell_derivatives(const std::vector<std::complex<double>>& Hext,
                                                   int M) {
    std::vector<std::complex<double>> gp(M);
    for (int c = 0; c < M; ++c) gp[c] = kCNorm * 0.5 * M * (Hext[c + 1] - Hext[c]);
    return gp;
}

// Extend H[n, .] from the open arcsine grid to s = 0..1 inclusive:
// s = 1 carries 0 (support), s = 0 by parity (odd orders vanish, even orders
// extrapolate quadratically with zero slope).
std::vector<std::complex<double>> extend_row(const HarmonicCoeffs& H, int n, int M) {
    std::vector<std::complex<double>> ext(M + 1);
    for (int j = 1; j < M; ++j) ext[j] = H.at(n, j - 1);
    ext[M] = 0.0;
    if (n % 2 != 0)
        ext[0] = 0.0;
    else
        ext[0] = (4.0 * ext[1] - ext[2]) / 3.0;
    return ext;
}
} // namespace

HarmonicCoeffs::HarmonicCoeffs(int nmax, std::vector<double> ss)
    : n_max(nmax), s_nodes(std::move(ss)) {
    if (nmax < 0) throw std::invalid_argument("HarmonicCoeffs: n_max must be >= 0");
    v.assign(static_cast<std::size_t>(2 * nmax + 1) * s_nodes.size(), {0.0, 0.0});
}

int canonical_radial_count(const std::vector<double>& psi_nodes) {
    const int n = static_cast<int>(psi_nodes.size());
    if (n < 2) throw std::invalid_argument("canonical_radial_count: need >= 2 psi nodes");
    const int M = n + 1;
    for (int j = 0; j < n; ++j) {
        const double expect = static_cast<double>(j + 1) / M;
        if (std::abs(std::sin(psi_nodes[j]) - expect) > 1e-9)
            throw std::invalid_argument(
                "inversion requires the canonical arcsine psi grid (sin psi uniform)");
    }
    return M;
}

HarmonicCoeffs sinogram_coeffs(const VlineSinogram& s, int n_max) {
    if (n_max < 1) throw std::invalid_argument("sinogram_coeffs: n_max must be >= 1");
    if (s.n_phi < 2 * n_max)
        throw std::invalid_argument("sinogram_coeffs: undersampled, need n_phi >= 2 n_max");
    std::vector<double> ss(s.psi_nodes.size());
    for (std::size_t j = 0; j < ss.size(); ++j) ss[j] = std::sin(s.psi_nodes[j]);
    HarmonicCoeffs G(n_max, std::move(ss));

    const int nphi = s.n_phi;
    const int npsi = s.n_psi();
    const bool pow2 = (nphi & (nphi - 1)) == 0;
    fft::cvec col(nphi);
    for (int j = 0; j < npsi; ++j) {
        for (int k = 0; k < nphi; ++k) col[k] = {s.at(k, j), 0.0};
        fft::cvec hat;
        if (pow2) {
            hat = col;
            fft::transform_pow2(hat, -1);
        } else {
            hat = fft::dft_direct(col);
        }
        for (int n = -n_max; n <= n_max; ++n) {
            int bin = ((n % nphi) + nphi) % nphi;
            G.at(n, j) = hat[bin] / static_cast<double>(nphi);
        }
    }
    return G;
}

HarmonicCoeffs regularized_radon_coeffs(const HarmonicCoeffs& G, const VlineInversionConfig& cfg) {
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
        throw std::invalid_argument("regularized_radon_coeffs: epsilon must lie in (0, 1)");
    HarmonicCoeffs H(G.n_max, G.s_nodes);
    for (int n = -G.n_max; n <= G.n_max; ++n) {
        for (int j = 0; j < G.n_s(); ++j) {
            const double psi = std::asin(G.s_nodes[j]);
            const double c = std::cos(n * (psi - kPi / 2.0));
            H.at(n, j) = c * G.at(n, j) / (cfg.epsilon * cfg.epsilon + c * c);
        }
    }
    return H;
}

HarmonicCoeffs xray_radon_coeffs(const HarmonicCoeffs& G) {
    HarmonicCoeffs H(G.n_max, G.s_nodes);
    for (int n = -G.n_max; n <= G.n_max; ++n) {
        for (int j = 0; j < G.n_s(); ++j) {
            const double psi = std::asin(G.s_nodes[j]);
            const std::complex<double> e(std::cos(n * (psi - kPi / 2.0)),
                                         -std::sin(n * (psi - kPi / 2.0)));
            // one branch instead of two: rescale by 2 to match the V-line
            // convention consumed by radial_solve
            H.at(n, j) = 2.0 * G.at(n, j) / e;
        }
    }
    return H;
}

double perry_weight(int n, int i, int j, int m) {
    if (i < 1 || i > m || j < 0 || j > m - 1)
        throw std::invalid_argument("perry_weight: index out of range");
    const int an = std::abs(n);
    const double ri = static_cast<double>(i) / m;
    const double s1 = static_cast<double>(j) / m;
    const double s2 = static_cast<double>(j + 1) / m;
    if (j < i) { // interior cell, integral of U_{|n|-1}(s/r_i)/r_i
        if (n == 0) return 0.0;
        return (cheb_T(an, s2 / ri) - cheb_T(an, s1 / ri)) / an;
    }
    // exterior cell
    if (n == 0) {
        const double a = std::log(s2 + std::sqrt(std::max(s2 * s2 - ri * ri, 0.0)));
        const double b = std::log(s1 + std::sqrt(std::max(s1 * s1 - ri * ri, 0.0)));
        return a - b;
    }
    const double ta = safe_acosh(s1 / ri);
    const double tb = safe_acosh(s2 / ri);
    return -(std::exp(-an * tb) - std::exp(-an * ta)) / an;
}

PolarCoefficients radial_solve(const HarmonicCoeffs& H, const VlineInversionConfig& cfg) {
    const int M = static_cast<int>(H.s_nodes.size()) + 1;
    // the grid must be the canonical one (uniform in s)
    for (int j = 0; j < H.n_s(); ++j)
        if (std::abs(H.s_nodes[j] - static_cast<double>(j + 1) / M) > 1e-9)
            throw std::invalid_argument("radial_solve: s grid must be uniform (j+1)/M");
    const int n_max = H.n_max;
    const int m_out = cfg.m > 0 ? cfg.m : M;
    PolarCoefficients F(n_max, m_out);

    parallel_for(static_cast<std::size_t>(2 * n_max + 1), [&](std::size_t b, std::size_t e) {
        for (std::size_t row = b; row < e; ++row) {
            const int n = static_cast<int>(row) - n_max;
            const int an = std::abs(n);
            const auto ext = extend_row(H, n, M);
            const auto gp = cell_derivatives(ext, M);
            for (int i = 1; i <= m_out; ++i) {
                const double rho = static_cast<double>(i) / m_out;
                std::complex<double> acc(0.0, 0.0);
                for (int c = 0; c < M; ++c) {
                    const double s1 = static_cast<double>(c) / M;
                    const double s2 = static_cast<double>(c + 1) / M;
                    if (s2 <= rho + 1e-12) { // interior cell
                        if (an != 0)
                            acc += gp[c] * ((cheb_T(an, s2 / rho) - cheb_T(an, s1 / rho)) / an);
                    } else if (s1 >= rho - 1e-12) { // exterior cell
                        double w;
                        if (an == 0) {
                            w = std::log(s2 + std::sqrt(std::max(s2 * s2 - rho * rho, 0.0))) -
                                std::log(s1 + std::sqrt(std::max(s1 * s1 - rho * rho, 0.0)));
                        } else {
                            w = -(std::exp(-an * safe_acosh(s2 / rho)) -
                                  std::exp(-an * safe_acosh(s1 / rho))) /
                                an;
                        }
                        acc -= gp[c] * w;
                    } else { // cell straddles rho: split at rho
                        if (an != 0)
                            acc += gp[c] * ((1.0 - cheb_T(an, s1 / rho)) / an);
                        double w;
                        if (an == 0) {
                            w = std::log(s2 + std::sqrt(std::max(s2 * s2 - rho * rho, 0.0))) -
                                std::log(rho);
                        } else {
                            w = -(std::exp(-an * safe_acosh(s2 / rho)) - 1.0) / an;
                        }
                        acc -= gp[c] * w;
                    }
                }
                F.at(n, i) = acc / kPi;
            }
            // r = 0: angular continuity forces orders n != 0 to vanish; the
            // n = 0 value extrapolates quadratically from r_1, r_2
            if (n == 0)
                F.at(0, 0) = (4.0 * F.at(0, 1) - F.at(0, 2)) / 3.0;
            else
                F.at(n, 0) = 0.0;
            F.at(n, m_out) = 0.0; // support strictly inside the unit disc
        }
    });
    return F;
}

namespace {
Image2D run_pipeline(const VlineSinogram& s, const VlineInversionConfig& cfg, int n_out,
                     bool xray) {
    const int M = canonical_radial_count(s.psi_nodes);
    VlineInversionConfig c = cfg;
    if (c.n_max <= 0) c.n_max = s.n_phi / 2 - 1;
    if (c.m <= 0) c.m = M;
    HarmonicCoeffs G = sinogram_coeffs(s, c.n_max);
    HarmonicCoeffs H = xray ? xray_radon_coeffs(G) : regularized_radon_coeffs(G, c);
    PolarCoefficients F = radial_solve(H, c);
    return polar_to_cartesian(F, n_out > 0 ? n_out : c.m + 1);
}
} // namespace

Image2D invert_vline(const VlineSinogram& s, const VlineInversionConfig& cfg, int n_out) {
    return run_pipeline(s, cfg, n_out, false);
}

Image2D invert_xray(const VlineSinogram& s, const VlineInversionConfig& cfg, int n_out) {
    return run_pipeline(s, cfg, n_out, true);
}

ExteriorResult invert_vline_exterior(const VlineSinogram& s, const VlineInversionConfig& cfg) {
    const int M = canonical_radial_count(s.psi_nodes);
    VlineInversionConfig c = cfg;
    if (c.n_max <= 0) c.n_max = s.n_phi / 2 - 1;
    if (c.m <= 0) c.m = M;
    HarmonicCoeffs G = sinogram_coeffs(s, c.n_max);
    HarmonicCoeffs H = regularized_radon_coeffs(G, c);

    const int n_max = c.n_max;
    const int m_out = c.m;
    PolarCoefficients F(n_max, m_out);
    for (int n = -n_max; n <= n_max; ++n) {
        const int an = std::abs(n);
        const auto ext = extend_row(H, n, M);
        const auto gp = cell_derivatives(ext, M);
        for (int i = 1; i <= m_out; ++i) {
            const double rho = static_cast<double>(i) / m_out;
            std::complex<double> acc(0.0, 0.0);
            for (int c2 = 0; c2 < M; ++c2) {
                const double s1 = static_cast<double>(c2) / M;
                const double s2 = static_cast<double>(c2 + 1) / M;
                if (s2 <= rho + 1e-12) continue; // exterior formula only sees s >= r
                const double lo = std::max(s1, rho);
                double w;
                if (an == 0) {
                    w = safe_acosh(s2 / rho) - safe_acosh(lo / rho);
                } else {
                    // int T_|n|(s/r)/sqrt(s^2-r^2) ds = sinh(|n| arccosh(s/r))/|n|
                    const double tb = safe_acosh(s2 / rho);
                    const double ta = safe_acosh(lo / rho);
                    const double cap = 700.0; // keep sinh finite; the variant is diagnostic
                    w = (std::sinh(std::min(an * tb, cap)) - std::sinh(std::min(an * ta, cap))) /
                        an;
                }
                acc -= gp[c2] * w;
            }
            F.at(n, i) = acc / kPi;
        }
        if (n == 0)
            F.at(0, 0) = (4.0 * F.at(0, 1) - F.at(0, 2)) / 3.0;
        else
            F.at(n, 0) = 0.0;
        F.at(n, m_out) = 0.0;
    }
    return {std::move(F),
            "exterior (Cormack-form) inversion is severely ill-posed: coefficient "
            "errors grow like exp(|n| arccosh(s/r)); use for diagnostics only"};
}

} // namespace crt
