#include "crt/cone.hpp"

#include "crt/detail/ray.hpp"
#include "crt/fft.hpp"
#include "crt/parallel.hpp"
#include "crt/special.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>

namespace crt {

namespace {
constexpr double kPi = std::numbers::pi;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// ---- gamma quadrature of the reduction kernels -------------------------

// 8-point Gauss-Legendre nodes/weights on [-1, 1]
const double kGx[8] = {-0.9602898564975362, -0.7966664774136267, -0.5255324099163290,
                       -0.1834346424956498, 0.1834346424956498, 0.5255324099163290,
                       0.7966664774136267, 0.9602898564975362};
const double kGw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                       0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                       0.2223810344533745, 0.1012285362903763};

struct GammaKernel {
    int k = 1;
    double A = 0.0; // sin(beta) cos(psi_out)
    double B = 0.0; // cos(beta)

    double numer(double g) const {
        double v = std::cos(g);
        for (int i = 1; i < k; ++i) v *= std::sin(g);
        return v;
    }
    // denominator of the main kernel: cos(psi') - A cos g - B sin g
    double denom(double cps, double g) const { return cps - A * std::cos(g) - B * std::sin(g); }
    double ddenom(double g) const { return A * std::sin(g) - B * std::cos(g); }
};

// PV integral of numer/denom over gamma in (-pi/2, 0) by singularity
// subtraction: interior roots of the denominator are removed analytically.
double pv_gamma_integral(const GammaKernel& ker, double cps, int n_gamma) {
    const double a = -kPi / 2.0, b = 0.0;
    // roots of cps = C cos(g - delta)
    double roots[2];
    double cr[2];
    int nroots = 0;
    const double C = std::hypot(ker.A, ker.B);
    if (C > 1e-14 && std::abs(cps) <= C) {
        const double delta = std::atan2(ker.B, ker.A);
        const double alpha = std::acos(std::clamp(cps / C, -1.0, 1.0));
        for (double g : {delta + alpha, delta - alpha, delta + alpha - 2.0 * kPi,
                         delta - alpha + 2.0 * kPi}) {
            if (g > a + 1e-12 && g < b - 1e-12 && nroots < 2) {
                const double dd = ker.ddenom(g);
                if (std::abs(dd) > 1e-10) {
                    bool dup = false;
                    for (int r = 0; r < nroots; ++r)
                        if (std::abs(roots[r] - g) < 1e-10) dup = true;
                    if (!dup) {
                        roots[nroots] = g;
                        cr[nroots] = ker.numer(g) / dd;
                        ++nroots;
                    }
                }
            }
        }
    }
    int panels = n_gamma / 8;
    if (panels < 4) panels = 4;
    const double hp = (b - a) / panels;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * hp;
        for (int q = 0; q < 8; ++q) {
            const double g = mid + 0.5 * hp * kGx[q];
            double v = ker.numer(g) / ker.denom(cps, g);
            for (int r = 0; r < nroots; ++r) v -= cr[r] / (g - roots[r]);
            acc += kGw[q] * 0.5 * hp * v;
        }
    }
    for (int r = 0; r < nroots; ++r)
        acc += cr[r] * std::log(std::abs((b - roots[r]) / (a - roots[r])));
    return acc;
}

// regular integral of numer/(1 -+ c(g)) for the endpoint kernels
double boundary_gamma_integral(const GammaKernel& ker, double sign_one, int n_gamma) {
    const double a = -kPi / 2.0, b = 0.0;
    int panels = n_gamma / 8;
    if (panels < 4) panels = 4;
    const double hp = (b - a) / panels;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * hp;
        for (int q = 0; q < 8; ++q) {
            const double g = mid + 0.5 * hp * kGx[q];
            const double c = ker.A * std::cos(g) + ker.B * std::sin(g);
            double den = sign_one - c; // sign_one = +1: (1 - c); -1 handled by caller
            acc += kGw[q] * 0.5 * hp * ker.numer(g) / den;
        }
    }
    return acc;
}
} // namespace

double kernel_value(int k_weight, double beta, double psi_cone, double psi_out, int n_gamma) {
    if (k_weight < 1) throw std::invalid_argument("kernel_value: k_weight must be >= 1");
    GammaKernel ker;
    ker.k = k_weight;
    ker.A = std::sin(beta) * std::cos(psi_out);
    ker.B = std::cos(beta);
    const double Ck = ((k_weight - 1) % 2 == 0 ? 1.0 : -1.0) /
                      (2.0 * kPi * kPi * factorial(k_weight - 1));
    return Ck * std::sin(psi_out) * pv_gamma_integral(ker, std::cos(psi_cone), n_gamma);
}

KernelTable kernel_table(int k_weight, const std::vector<double>& beta_nodes,
                         const std::vector<double>& psi_nodes,
                         const std::vector<double>& psi_out_nodes, int n_gamma) {
    if (k_weight < 1)
        throw std::invalid_argument("kernel_table: k_weight must be >= 1 (use Method 2 for k=0)");
    if (beta_nodes.empty() || psi_nodes.size() < 4 || psi_out_nodes.empty())
        throw std::invalid_argument("kernel_table: empty grids");
    KernelTable kt;
    kt.k_weight = k_weight;
    kt.beta_nodes = beta_nodes;
    kt.psi_nodes = psi_nodes;
    kt.psi_out_nodes = psi_out_nodes;
    const int nb = kt.n_beta(), np = kt.n_psi(), no = kt.n_out();
    const double dpsi = np > 1 ? psi_nodes[1] - psi_nodes[0] : kPi;
    for (int jp = 1; jp < np; ++jp)
        if (std::abs((psi_nodes[jp] - psi_nodes[jp - 1]) - dpsi) > 1e-9)
            throw std::invalid_argument("kernel_table: psi grid must be uniform");
    kt.scale = ((k_weight - 1) % 2 == 0 ? 1.0 : -1.0) /
               (2.0 * kPi * kPi * factorial(k_weight - 1));

    // composite Gauss-Legendre nodes over gamma in (-pi/2, 0)
    int panels = n_gamma / 8;
    if (panels < 4) panels = 4;
    kt.n_gamma = panels * 8;
    kt.gamma_nodes.resize(kt.n_gamma);
    kt.gamma_weight.resize(kt.n_gamma);
    const double hp = (kPi / 2.0) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = -kPi / 2.0 + (p + 0.5) * hp;
        for (int q = 0; q < 8; ++q) {
            const double g = mid + 0.5 * hp * kGx[q];
            double numer = std::cos(g);
            for (int i = 1; i < k_weight; ++i) numer *= std::sin(g);
            kt.gamma_nodes[p * 8 + q] = g;
            kt.gamma_weight[p * 8 + q] = kGw[q] * 0.5 * hp * numer;
        }
    }

    const int ng = kt.n_gamma;
    kt.recip.assign(static_cast<std::size_t>(nb) * no * ng * np, 0.0);
    kt.recip_sum.assign(static_cast<std::size_t>(nb) * no * ng, 0.0);
    kt.pole_psi.assign(static_cast<std::size_t>(nb) * no * ng, -1.0);
    kt.bdry0.assign(static_cast<std::size_t>(nb) * no, 0.0);
    kt.bdry_pi.assign(static_cast<std::size_t>(nb) * no, 0.0);

    std::vector<double> cos_psi(np);
    for (int jp = 0; jp < np; ++jp) cos_psi[jp] = std::cos(psi_nodes[jp]);

    parallel_for(static_cast<std::size_t>(nb), [&](std::size_t bb, std::size_t be) {
        for (std::size_t ib = bb; ib < be; ++ib) {
            const double beta = beta_nodes[ib];
            for (int jo = 0; jo < no; ++jo) {
                const double po = psi_out_nodes[jo];
                const double A = std::sin(beta) * std::cos(po);
                const double B = std::cos(beta);
                for (int g = 0; g < ng; ++g) {
                    const double gam = kt.gamma_nodes[g];
                    const double c = A * std::cos(gam) + B * std::sin(gam);
                    const std::size_t base = ((ib * no + jo) * ng + g);
                    double sum = 0.0;
                    for (int jp = 0; jp < np; ++jp) {
                        const double r = dpsi / (cos_psi[jp] - c);
                        kt.recip[base * np + jp] = r;
                        sum += r;
                    }
                    kt.recip_sum[base] = sum;
                    kt.pole_psi[base] = std::abs(c) < 1.0 ? std::acos(c) : -1.0;
                }
                GammaKernel ker;
                ker.k = k_weight;
                ker.A = A;
                ker.B = B;
                const double sc = kt.scale * std::sin(po);
                kt.bdry0[ib * no + jo] = sc * boundary_gamma_integral(ker, +1.0, n_gamma);
                GammaKernel ker2 = ker;
                ker2.A = -A;
                ker2.B = -B;
                kt.bdry_pi[ib * no + jo] = sc * boundary_gamma_integral(ker2, +1.0, n_gamma);
            }
        }
    });
    return kt;
}

std::vector<VlineSinogram> vline_from_cone(const ConeData& c, const KernelTable& kt) {
    if (c.k_weight < 1) throw std::invalid_argument("vline_from_cone: k_weight must be >= 1");
    const int k = c.k_weight;
    if (c.n_z() < k + 2)
        throw std::invalid_argument("vline_from_cone: need at least k+2 z samples");
    if (c.n_beta() != kt.n_beta() || c.n_psi() != kt.n_psi() || c.k_weight != kt.k_weight)
        throw std::invalid_argument("vline_from_cone: kernel table grids do not match the data");
    for (int i = 0; i < c.n_beta(); ++i)
        if (std::abs(c.beta_nodes[i] - kt.beta_nodes[i]) > 1e-12)
            throw std::invalid_argument("vline_from_cone: beta grids differ");
    for (int i = 0; i < c.n_psi(); ++i)
        if (std::abs(c.psi_nodes[i] - kt.psi_nodes[i]) > 1e-12)
            throw std::invalid_argument("vline_from_cone: psi grids differ");
    const int nphi = c.n_phi, nz = c.n_z(), nb = c.n_beta(), np = c.n_psi(), no = kt.n_out();
    const double dpsi = np > 1 ? c.psi_nodes[1] - c.psi_nodes[0] : 0.0;
    const double dbeta = nb > 1 ? c.beta_nodes[1] - c.beta_nodes[0] : kPi;
    const double dz = c.dz();

    // G = C / sin(psi), its psi derivative, and the psi -> {0, pi} limits
    // (linear extrapolation from the two nearest nodes)
    const std::size_t nfield = static_cast<std::size_t>(nphi) * nz * nb;
    std::vector<double> dpsiG(nfield * np);
    std::vector<double> G0(nfield), Gpi(nfield);
    parallel_for(nfield, [&](std::size_t fb, std::size_t fe) {
        std::vector<double> row(np);
        for (std::size_t f = fb; f < fe; ++f) {
            const int iphi = static_cast<int>(f / (static_cast<std::size_t>(nz) * nb));
            const int iz = static_cast<int>((f / nb) % nz);
            const int ib = static_cast<int>(f % nb);
            for (int jp = 0; jp < np; ++jp)
                row[jp] = c.at(iphi, iz, ib, jp) / std::sin(c.psi_nodes[jp]);
            const double t0 = c.psi_nodes[0] / dpsi;
            G0[f] = row[0] - t0 * (row[1] - row[0]);
            const double t1 = (kPi - c.psi_nodes[np - 1]) / dpsi;
            Gpi[f] = row[np - 1] + t1 * (row[np - 1] - row[np - 2]);
            for (int jp = 0; jp < np; ++jp) {
                double d;
                if (jp == 0)
                    d = (-1.5 * row[0] + 2.0 * row[1] - 0.5 * row[2]) / dpsi;
                else if (jp == np - 1)
                    d = (1.5 * row[np - 1] - 2.0 * row[np - 2] + 0.5 * row[np - 3]) / dpsi;
                else
                    d = (row[jp + 1] - row[jp - 1]) / (2.0 * dpsi);
                dpsiG[f * np + jp] = d;
            }
        }
    });

    // k-th z derivative, one first-derivative pass at a time (second order,
    // one-sided at the ends)
    auto dz_pass = [&](std::vector<double>& field, int stride) {
        std::vector<double> out(field.size());
        parallel_for(static_cast<std::size_t>(nphi), [&](std::size_t pb, std::size_t pe) {
            for (std::size_t iphi = pb; iphi < pe; ++iphi) {
                for (int iz = 0; iz < nz; ++iz) {
                    for (int r = 0; r < nb * stride; ++r) {
                        auto idx = [&](int zz) {
                            return (static_cast<std::size_t>(iphi) * nz + zz) * nb * stride + r;
                        };
                        double d;
                        if (iz == 0)
                            d = (-1.5 * field[idx(0)] + 2.0 * field[idx(1)] -
                                 0.5 * field[idx(2)]) / dz;
                        else if (iz == nz - 1)
                            d = (1.5 * field[idx(nz - 1)] - 2.0 * field[idx(nz - 2)] +
                                 0.5 * field[idx(nz - 3)]) / dz;
                        else
                            d = (field[idx(iz + 1)] - field[idx(iz - 1)]) / (2.0 * dz);
                        out[idx(iz)] = d;
                    }
                }
            }
        });
        field = std::move(out);
    };
    for (int pass = 0; pass < k; ++pass) {
        dz_pass(dpsiG, np);
        dz_pass(G0, 1);
        dz_pass(Gpi, 1);
    }

    std::vector<VlineSinogram> out;
    out.reserve(nz);
    for (int iz = 0; iz < nz; ++iz) out.emplace_back(nphi, kt.psi_out_nodes);
    const int ng = kt.n_gamma;
    const double psi0 = c.psi_nodes[0];
    parallel_for(static_cast<std::size_t>(nphi) * nz, [&](std::size_t sb, std::size_t se) {
        for (std::size_t s = sb; s < se; ++s) {
            const int iphi = static_cast<int>(s) / nz;
            const int iz = static_cast<int>(s) % nz;
            for (int jo = 0; jo < no; ++jo) {
                const double sin_po = std::sin(kt.psi_out_nodes[jo]);
                double acc = 0.0;
                for (int ib = 0; ib < nb; ++ib) {
                    const std::size_t f = (static_cast<std::size_t>(iphi) * nz + iz) * nb + ib;
                    const double* T = &dpsiG[f * np];
                    double inner = 0.0;
                    for (int g = 0; g < ng; ++g) {
                        const std::size_t base = ((static_cast<std::size_t>(ib) * no + jo) * ng + g);
                        const double* R = &kt.recip[base * np];
                        const double pole = kt.pole_psi[base];
                        double dot;
                        if (pole >= 0.0) {
                            // interpolate the integrand at the pole and
                            // subtract it termwise; the residual is bounded
                            double fq = (pole - psi0) / dpsi;
                            double Tstar;
                            if (fq <= 0.0)
                                Tstar = T[0];
                            else if (fq >= np - 1)
                                Tstar = T[np - 1];
                            else {
                                const int j0 = static_cast<int>(fq);
                                const double tt = fq - j0;
                                Tstar = (1.0 - tt) * T[j0] + tt * T[j0 + 1];
                            }
                            dot = 0.0;
                            for (int jp = 0; jp < np; ++jp) dot += (T[jp] - Tstar) * R[jp];
                        } else {
                            dot = 0.0;
                            for (int jp = 0; jp < np; ++jp) dot += T[jp] * R[jp];
                        }
                        inner += kt.gamma_weight[g] * dot;
                    }
                    acc += kt.scale * sin_po * inner;
                    acc += G0[f] * kt.bdry0[static_cast<std::size_t>(ib) * no + jo];
                    acc += Gpi[f] * kt.bdry_pi[static_cast<std::size_t>(ib) * no + jo];
                }
                out[iz].at(iphi, jo) = acc * dbeta;
            }
        }
    });
    return out;
}

Volume3D invert_cone_method1(const ConeData& c, const KernelTable& kt,
                             const VlineInversionConfig& vcfg, const VolumeGridSpec& grid) {
    auto sinos = vline_from_cone(c, kt);
    Volume3D vol(grid.n_x, grid.n_y, grid.n_z, grid.extent_xy, grid.z_min, grid.z_max);

    parallel_for(static_cast<std::size_t>(grid.n_z), [&](std::size_t zb, std::size_t ze) {
        for (std::size_t iz = zb; iz < ze; ++iz) {
            const double z = vol.z(static_cast<int>(iz));
            // interpolate the sinogram family in z
            const double fz = (z - c.z_nodes.front()) / c.dz();
            if (fz < 0.0 || fz > c.n_z() - 1) continue;
            int l0 = static_cast<int>(fz);
            if (l0 >= c.n_z() - 1) l0 = c.n_z() - 2;
            const double t = fz - l0;
            VlineSinogram s(c.n_phi, kt.psi_out_nodes);
            for (std::size_t i = 0; i < s.data.size(); ++i)
                s.data[i] = (1.0 - t) * sinos[l0].data[i] + t * sinos[l0 + 1].data[i];
            Image2D slice = invert_vline(s, vcfg, grid.n_x);
            for (int ix = 0; ix < grid.n_x; ++ix)
                for (int iy = 0; iy < grid.n_y; ++iy)
                    vol.at(ix, iy, static_cast<int>(iz)) = slice.sample(vol.x(ix), vol.y(iy));
        }
    });
    return vol;
}

namespace {

void check_psi_symmetric(const std::vector<double>& psi) {
    const int n = static_cast<int>(psi.size());
    for (int j = 0; j < n; ++j)
        if (std::abs(psi[j] + psi[n - 1 - j] - kPi) > 1e-9)
            throw std::invalid_argument("cone psi grid must be symmetric about pi/2");
    for (int j = 1; j < n; ++j)
        if (std::abs((psi[j] - psi[j - 1]) - (psi[1] - psi[0])) > 1e-9)
            throw std::invalid_argument("cone psi grid must be uniform");
}

// Catmull-Rom interpolation on a uniform grid, clamped ends.
double cubic_interp(const double* v, int n, double x) {
    if (x <= 0.0) return v[0];
    if (x >= n - 1) return v[n - 1];
    int i = static_cast<int>(x);
    if (i > n - 2) i = n - 2;
    const double t = x - i;
    const double p0 = v[i > 0 ? i - 1 : 0];
    const double p1 = v[i];
    const double p2 = v[i + 1];
    const double p3 = v[i + 2 < n ? i + 2 : n - 1];
    return p1 + 0.5 * t * (p2 - p0 +
                           t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                t * (3.0 * (p1 - p2) + p3 - p0)));
}

// Spectral derivative with a smooth low-pass: unity below 0.6 omega_max,
// cosine rolloff to zero at omega_max (0 disables the window). The mapped
// Radon rows are resampled from much coarser per-direction data, so
// differentiating up to the fine grid's Nyquist would only amplify
// interpolation noise.
std::vector<double> spectral_derivative(const std::vector<double>& g, double ds, int order,
                                        double omega_max = 0.0) {
    const std::size_t n = g.size();
    const std::size_t L = fft::next_pow2(4 * n);
    fft::cvec a(L, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) a[i] = {g[i], 0.0};
    fft::transform_pow2(a, -1);
    for (std::size_t q = 0; q < L; ++q) {
        const long long qi = static_cast<long long>(q);
        const long long Li = static_cast<long long>(L);
        double fr = static_cast<double>(q <= L / 2 ? qi : qi - Li) / (static_cast<double>(L) * ds);
        const double w = 2.0 * kPi * fr;
        std::complex<double> mult;
        if (order == 1)
            mult = {0.0, w};
        else
            mult = {-w * w, 0.0};
        if (q == L / 2) mult = 0.0; // drop the unmatched Nyquist bin
        if (omega_max > 0.0) {
            const double aw = std::abs(w);
            if (aw >= omega_max)
                mult = 0.0;
            else if (aw > 0.6 * omega_max) {
                const double t = (aw - 0.6 * omega_max) / (0.4 * omega_max);
                const double win = 0.5 + 0.5 * std::cos(kPi * t);
                mult *= win;
            }
        }
        a[q] *= mult;
    }
    fft::transform_pow2(a, +1);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i].real() / static_cast<double>(L);
    return out;
}

} // namespace

Method2Intermediate cone_moments(const ConeData& c, int n_s) {
    if (c.k_weight != 0 && c.k_weight != 1)
        throw std::invalid_argument("cone_moments: only k_weight 0 and 1 are supported");
    if (c.n_psi() < 4 || c.n_z() < 4)
        throw std::invalid_argument("cone_moments: need at least 4 psi and 4 z samples");
    check_psi_symmetric(c.psi_nodes);
    const int nphi = c.n_phi, nz = c.n_z(), nb = c.n_beta(), np = c.n_psi();
    const double dpsi = c.psi_nodes[1] - c.psi_nodes[0];

    Method2Intermediate mi;
    mi.moments.assign(static_cast<std::size_t>(nphi) * nb * nz, 0.0);
    mi.derivative_order = 1 - c.k_weight;

    parallel_for(static_cast<std::size_t>(nphi), [&](std::size_t pb, std::size_t pe) {
        for (std::size_t iphi = pb; iphi < pe; ++iphi) {
            for (int ib = 0; ib < nb; ++ib) {
                for (int iz = 0; iz < nz; ++iz) {
                    double acc = 0.0;
                    if (c.k_weight == 1) {
                        // -(1/pi) PV int C_1/cos(psi) dpsi, symmetric grid
                        for (int jp = 0; jp < np; ++jp)
                            acc -= c.at(static_cast<int>(iphi), iz, ib, jp) /
                                   std::cos(c.psi_nodes[jp]);
                        acc *= dpsi / kPi;
                    } else {
                        // finite part of -(1/pi) int C_0/cos^2 by parts:
                        // +(1/pi) int tan(psi) dC0/dpsi dpsi
                        for (int jp = 0; jp < np; ++jp) {
                            double d;
                            if (jp == 0)
                                d = (-1.5 * c.at(static_cast<int>(iphi), iz, ib, 0) +
                                     2.0 * c.at(static_cast<int>(iphi), iz, ib, 1) -
                                     0.5 * c.at(static_cast<int>(iphi), iz, ib, 2)) / dpsi;
                            else if (jp == np - 1)
                                d = (1.5 * c.at(static_cast<int>(iphi), iz, ib, np - 1) -
                                     2.0 * c.at(static_cast<int>(iphi), iz, ib, np - 2) +
                                     0.5 * c.at(static_cast<int>(iphi), iz, ib, np - 3)) / dpsi;
                            else
                                d = (c.at(static_cast<int>(iphi), iz, ib, jp + 1) -
                                     c.at(static_cast<int>(iphi), iz, ib, jp - 1)) /
                                    (2.0 * dpsi);
                            acc += std::tan(c.psi_nodes[jp]) * d;
                        }
                        acc *= dpsi / kPi;
                    }
                    mi.moments[(iphi * nb + ib) * nz + iz] = acc;
                }
            }
        }
    });

    // resample z -> s = z cos(beta) - sin(beta), completing every direction
    // with its antipodal row (phi + pi, pi - beta)
    const double zmax = std::max(std::abs(c.z_nodes.front()), std::abs(c.z_nodes.back()));
    const double smax = 1.0 + zmax;
    if (n_s <= 0) n_s = std::max(512, 4 * nz);
    std::vector<double> ss(n_s);
    for (int i = 0; i < n_s; ++i) ss[i] = -smax + 2.0 * smax * i / (n_s - 1);
    mi.mapped = RadonData3D(nphi, c.beta_nodes, ss);
    mi.row_covered.assign(static_cast<std::size_t>(nphi) * nb, 0);

    const bool have_antipode = (nphi % 2 == 0);
    bool beta_mirror = true;
    for (int ib = 0; ib < nb; ++ib)
        if (std::abs(c.beta_nodes[ib] + c.beta_nodes[nb - 1 - ib] - kPi) > 1e-9) beta_mirror = false;
    const double sgn_b = c.k_weight == 1 ? -1.0 : 1.0;

    parallel_for(static_cast<std::size_t>(nphi) * nb, [&](std::size_t rb, std::size_t re) {
        std::vector<double> rowA(nz), rowB(nz);
        for (std::size_t r = rb; r < re; ++r) {
            const int iphi = static_cast<int>(r) / nb;
            const int ib = static_cast<int>(r) % nb;
            const double cb = std::cos(c.beta_nodes[ib]);
            const double sb = std::sin(c.beta_nodes[ib]);
            for (int iz = 0; iz < nz; ++iz)
                rowA[iz] = mi.moments[(static_cast<std::size_t>(iphi) * nb + ib) * nz + iz];
            bool haveB = have_antipode && beta_mirror;
            if (haveB) {
                const int iphi2 = (iphi + nphi / 2) % nphi;
                const int ib2 = nb - 1 - ib;
                for (int iz = 0; iz < nz; ++iz)
                    rowB[iz] = sgn_b *
                               mi.moments[(static_cast<std::size_t>(iphi2) * nb + ib2) * nz + iz];
            }
            // row A lives at s = z cb - sb, row B at s = z cb + sb (after the
            // antipodal reflection); both are uniform with spacing cb * dz
            auto eval_row = [&](const std::vector<double>& row, double offset, double s,
                                bool& ok) -> double {
                if (std::abs(cb) < 1e-9) {
                    ok = false;
                    return 0.0;
                }
                double fz = ((s - offset) / cb - c.z_nodes.front()) / c.dz();
                if (fz < 0.0 || fz > nz - 1) {
                    ok = false;
                    return 0.0;
                }
                ok = true;
                return cubic_interp(row.data(), nz, fz);
            };
            int covered_from = n_s, covered_to = -1;
            for (int i = 0; i < n_s; ++i) {
                bool okA = false, okB = false;
                const double vA = eval_row(rowA, -sb, ss[i], okA);
                const double vB = haveB ? eval_row(rowB, +sb, ss[i], okB) : 0.0;
                double v = 0.0;
                bool any = okA || okB;
                if (okA && okB)
                    v = 0.5 * (vA + vB);
                else if (okA)
                    v = vA;
                else if (okB)
                    v = vB;
                if (any) {
                    covered_from = std::min(covered_from, i);
                    covered_to = std::max(covered_to, i);
                }
                mi.mapped.at(iphi, ib, i) = any ? v : std::nan("");
            }
            // tails decay like (total mass)/(pi s): extend with a 1/s law
            bool central_gap = false;
            if (covered_to >= covered_from) {
                for (int i = covered_from; i <= covered_to; ++i)
                    if (std::isnan(mi.mapped.at(iphi, ib, i))) central_gap = true;
                for (int i = 0; i < covered_from; ++i)
                    mi.mapped.at(iphi, ib, i) =
                        mi.mapped.at(iphi, ib, covered_from) * ss[covered_from] / ss[i];
                for (int i = covered_to + 1; i < n_s; ++i)
                    mi.mapped.at(iphi, ib, i) =
                        mi.mapped.at(iphi, ib, covered_to) * ss[covered_to] / ss[i];
            } else {
                central_gap = true;
                for (int i = 0; i < n_s; ++i) mi.mapped.at(iphi, ib, i) = 0.0;
            }
            if (central_gap)
                for (int i = 0; i < n_s; ++i)
                    if (std::isnan(mi.mapped.at(iphi, ib, i))) mi.mapped.at(iphi, ib, i) = 0.0;
            mi.row_covered[static_cast<std::size_t>(iphi) * nb + ib] = central_gap ? 0 : 1;
        }
    });
    return mi;
}

Volume3D invert_cone_method2(const ConeData& c, const VolumeGridSpec& grid, int n_s_req) {
    if (c.n_beta() < 16)
        std::cerr << "invert_cone_method2: warning: only " << c.n_beta()
                  << " beta nodes, the sphere quadrature is underresolved\n";
    Method2Intermediate mi = cone_moments(c, n_s_req);
    const int nphi = c.n_phi, nb = c.n_beta(), n_s = mi.mapped.n_s();
    const double ds = mi.mapped.ds();
    const std::vector<double>& ss = mi.mapped.s_nodes;

    // reconstruction assumes supp f inside the requested volume
    const double zr = std::max(std::abs(grid.z_min), std::abs(grid.z_max));
    const double support_radius = std::hypot(grid.extent_xy * std::numbers::sqrt2, zr);
    const double roll = 0.25;
    auto taper = [&](double s) {
        const double w = std::clamp((support_radius + roll - std::abs(s)) / roll, 0.0, 1.0);
        return 0.5 - 0.5 * std::cos(kPi * w);
    };

    // per-direction filtered profiles D = d^2/ds^2 R f
    std::vector<double> D(static_cast<std::size_t>(nphi) * nb * n_s);
    const double dz_data = c.dz();
    parallel_for(static_cast<std::size_t>(nphi), [&](std::size_t pb, std::size_t pe) {
        for (std::size_t iphi = pb; iphi < pe; ++iphi) {
            for (int ib = 0; ib < nb; ++ib) {
                if (!mi.row_covered[iphi * nb + ib]) continue;
                std::vector<double> q(n_s);
                for (int i = 0; i < n_s; ++i) q[i] = mi.mapped.at(static_cast<int>(iphi), ib, i);
                // undo the Hilbert transform (H H g = -g), confine to the
                // support, then differentiate band-limited to the rate the
                // row was actually sampled at
                std::vector<double> p = hilbert_uniform(q);
                for (int i = 0; i < n_s; ++i) p[i] = -p[i] * taper(ss[i]);
                const double row_h =
                    std::max(std::abs(std::cos(c.beta_nodes[ib])) * dz_data, 2.0 * ds);
                std::vector<double> d =
                    spectral_derivative(p, ds, c.k_weight == 1 ? 2 : 1, kPi / row_h);
                for (int i = 0; i < n_s; ++i)
                    D[(iphi * nb + ib) * n_s + i] = d[i];
            }
        }
    });
    // rows with a central coverage gap: interpolate the filtered profiles
    // across beta at fixed (phi, s)
    for (int iphi = 0; iphi < nphi; ++iphi) {
        std::vector<int> good;
        for (int ib = 0; ib < nb; ++ib)
            if (mi.row_covered[static_cast<std::size_t>(iphi) * nb + ib]) good.push_back(ib);
        if (static_cast<int>(good.size()) == nb || good.empty()) continue;
        for (int ib = 0; ib < nb; ++ib) {
            if (mi.row_covered[static_cast<std::size_t>(iphi) * nb + ib]) continue;
            // nearest covered neighbors in beta
            int lo = -1, hi = -1;
            for (int g : good) {
                if (g < ib) lo = g;
                if (g > ib) { hi = g; break; }
            }
            for (int i = 0; i < n_s; ++i) {
                double v;
                if (lo >= 0 && hi >= 0) {
                    const double t = (c.beta_nodes[ib] - c.beta_nodes[lo]) /
                                     (c.beta_nodes[hi] - c.beta_nodes[lo]);
                    v = (1.0 - t) * D[(static_cast<std::size_t>(iphi) * nb + lo) * n_s + i] +
                        t * D[(static_cast<std::size_t>(iphi) * nb + hi) * n_s + i];
                } else {
                    const int g = lo >= 0 ? lo : hi;
                    v = D[(static_cast<std::size_t>(iphi) * nb + g) * n_s + i];
                }
                D[(static_cast<std::size_t>(iphi) * nb + ib) * n_s + i] = v;
            }
        }
    }

    // backprojection over the direction sphere
    Volume3D vol(grid.n_x, grid.n_y, grid.n_z, grid.extent_xy, grid.z_min, grid.z_max);
    const double dphi = 2.0 * kPi / nphi;
    const double dbeta = nb > 1 ? c.beta_nodes[1] - c.beta_nodes[0] : kPi;
    const double s0 = ss.front();
    parallel_for(static_cast<std::size_t>(grid.n_x), [&](std::size_t xb, std::size_t xe) {
        for (std::size_t ix = xb; ix < xe; ++ix) {
            for (int iphi = 0; iphi < nphi; ++iphi) {
                const double phi = c.phi(iphi);
                for (int ib = 0; ib < nb; ++ib) {
                    const double beta = c.beta_nodes[ib];
                    const auto om = axis_vector(phi, beta);
                    const double w = std::sin(beta) * dphi * dbeta;
                    const double* drow = &D[(static_cast<std::size_t>(iphi) * nb + ib) * n_s];
                    const double tx = om[0] * vol.x(static_cast<int>(ix));
                    for (int iy = 0; iy < grid.n_y; ++iy) {
                        const double txy = tx + om[1] * vol.y(iy);
                        for (int iz = 0; iz < grid.n_z; ++iz) {
                            const double t = txy + om[2] * vol.z(iz);
                            vol.at(static_cast<int>(ix), iy, iz) +=
                                w * cubic_interp(drow, n_s, (t - s0) / ds);
                        }
                    }
                }
            }
        }
    });
    const double scale = -1.0 / (8.0 * kPi * kPi);
    for (double& v : vol.values) v *= scale;
    return vol;
}

Volume3D adjoint_cone(const ConeData& g, const VolumeGridSpec& grid, const ConeQuadratureSpec& q) {
    Volume3D vol(grid.n_x, grid.n_y, grid.n_z, grid.extent_xy, grid.z_min, grid.z_max);
    const int nphi = g.n_phi, nz = g.n_z(), nb = g.n_beta(), np = g.n_psi();
    const double dphi = 2.0 * kPi / nphi;
    const double dz = g.dz();
    const double dbeta = nb > 1 ? g.beta_nodes[1] - g.beta_nodes[0] : kPi;
    const double dpsi = np > 1 ? g.psi_nodes[1] - g.psi_nodes[0] : kPi;
    const double cell_measure = dphi * dz * dbeta * dpsi;
    const double hx = 2.0 * grid.extent_xy / (grid.n_x - 1);
    const double hy = 2.0 * grid.extent_xy / (grid.n_y - 1);
    const double hz = (grid.z_max - grid.z_min) / (grid.n_z - 1);
    const double voxel = hx * hy * hz;
    const double deta = 2.0 * kPi / q.n_eta;

    // scatter pass mirroring conical_forward's gather exactly; threads own
    // private volumes merged in a fixed order afterwards
    const int nworkers = worker_count();
    std::vector<std::vector<double>> partial(static_cast<std::size_t>(nworkers));
    const std::size_t total = static_cast<std::size_t>(nphi) * nz;
    const std::size_t chunk = (total + nworkers - 1) / nworkers;
    parallel_for(total, [&](std::size_t b, std::size_t e) {
        const std::size_t wid = b / chunk;
        auto& buf = partial[wid];
        buf.assign(vol.values.size(), 0.0);
        for (std::size_t vtx = b; vtx < e; ++vtx) {
            const int iphi = static_cast<int>(vtx) / nz;
            const int iz = static_cast<int>(vtx) % nz;
            const double phi = g.phi(iphi);
            const std::array<double, 3> v{std::cos(phi), std::sin(phi), g.z_nodes[iz]};
            const std::array<double, 3> u1{-std::sin(phi), std::cos(phi), 0.0};
            for (int ib = 0; ib < nb; ++ib) {
                const auto ax = axis_vector(phi, g.beta_nodes[ib]);
                const std::array<double, 3> u2{ax[1] * u1[2] - ax[2] * u1[1],
                                               ax[2] * u1[0] - ax[0] * u1[2],
                                               ax[0] * u1[1] - ax[1] * u1[0]};
                for (int jp = 0; jp < np; ++jp) {
                    const double psi = g.psi_nodes[jp];
                    const double val = g.at(iphi, iz, ib, jp);
                    if (val == 0.0) continue;
                    const double cp = std::cos(psi), sp = std::sin(psi);
                    const double amp = val * sp * deta * cell_measure / voxel;
                    for (int t = 0; t < q.n_eta; ++t) {
                        const double ce = std::cos(t * deta), se = std::sin(t * deta);
                        const std::array<double, 3> w{cp * ax[0] + sp * (ce * u1[0] + se * u2[0]),
                                                      cp * ax[1] + sp * (ce * u1[1] + se * u2[1]),
                                                      cp * ax[2] + sp * (ce * u1[2] + se * u2[2])};
                        detail::weighted_ray_samples(
                            vol, v, w, g.k_weight, q.step_r, q.r_max,
                            [&](double x, double y, double z, double wq) {
                                // trilinear transpose scatter
                                const double fx = (x + grid.extent_xy) / hx;
                                const double fy = (y + grid.extent_xy) / hy;
                                const double fz = (z - grid.z_min) / hz;
                                if (fx < 0 || fy < 0 || fz < 0 || fx > grid.n_x - 1 ||
                                    fy > grid.n_y - 1 || fz > grid.n_z - 1)
                                    return;
                                int ix = std::min(static_cast<int>(fx), grid.n_x - 2);
                                int iy = std::min(static_cast<int>(fy), grid.n_y - 2);
                                int izv = std::min(static_cast<int>(fz), grid.n_z - 2);
                                const double txf = fx - ix, tyf = fy - iy, tzf = fz - izv;
                                const double a = amp * wq;
                                for (int ddx = 0; ddx <= 1; ++ddx)
                                    for (int ddy = 0; ddy <= 1; ++ddy)
                                        for (int ddz = 0; ddz <= 1; ++ddz) {
                                            const double wt = (ddx ? txf : 1 - txf) *
                                                              (ddy ? tyf : 1 - tyf) *
                                                              (ddz ? tzf : 1 - tzf);
                                            buf[(static_cast<std::size_t>(ix + ddx) * grid.n_y +
                                                 (iy + ddy)) * grid.n_z + (izv + ddz)] += a * wt;
                                        }
                            });
                    }
                }
            }
        }
    });
    for (const auto& buf : partial)
        if (!buf.empty())
            for (std::size_t i = 0; i < vol.values.size(); ++i) vol.values[i] += buf[i];
    return vol;
}

Volume3D invert_cone_direct(const ConeData& c, const VolumeGridSpec& grid, bool allow_large) {
    if (c.k_weight != 0 && c.k_weight != 1)
        throw std::invalid_argument("invert_cone_direct: only k in {0,1}");
    const long voxels = static_cast<long>(grid.n_x) * grid.n_y * grid.n_z;
    if (!allow_large && voxels > 32L * 32 * 32)
        throw std::invalid_argument(
            "invert_cone_direct: volume larger than 32^3; pass allow_large to override");
    if (c.n_psi() < 4 || c.n_z() < 4)
        throw std::invalid_argument("invert_cone_direct: need at least 4 psi and 4 z samples");
    check_psi_symmetric(c.psi_nodes);
    const int nphi = c.n_phi, nz = c.n_z(), nb = c.n_beta(), np = c.n_psi();
    const double dpsi = c.psi_nodes[1] - c.psi_nodes[0];
    const double dz = c.dz();
    const double dphi = 2.0 * kPi / nphi;
    const double dbeta = nb > 1 ? c.beta_nodes[1] - c.beta_nodes[0] : kPi;

    // P(phi, z, beta) = FP int d_z^2 C_k / cos^{2-k}(psi) dpsi
    std::vector<double> P(static_cast<std::size_t>(nphi) * nz * nb, 0.0);
    parallel_for(static_cast<std::size_t>(nphi), [&](std::size_t pb, std::size_t pe) {
        std::vector<double> row(np);
        for (std::size_t iphi = pb; iphi < pe; ++iphi) {
            for (int ib = 0; ib < nb; ++ib) {
                for (int iz = 0; iz < nz; ++iz) {
                    // second z derivative of the data at fixed (beta, psi)
                    for (int jp = 0; jp < np; ++jp) {
                        double d2;
                        if (iz == 0)
                            d2 = (2.0 * c.at(static_cast<int>(iphi), 0, ib, jp) -
                                  5.0 * c.at(static_cast<int>(iphi), 1, ib, jp) +
                                  4.0 * c.at(static_cast<int>(iphi), 2, ib, jp) -
                                  c.at(static_cast<int>(iphi), 3, ib, jp)) / (dz * dz);
                        else if (iz == nz - 1)
                            d2 = (2.0 * c.at(static_cast<int>(iphi), nz - 1, ib, jp) -
                                  5.0 * c.at(static_cast<int>(iphi), nz - 2, ib, jp) +
                                  4.0 * c.at(static_cast<int>(iphi), nz - 3, ib, jp) -
                                  c.at(static_cast<int>(iphi), nz - 4, ib, jp)) / (dz * dz);
                        else
                            d2 = (c.at(static_cast<int>(iphi), iz + 1, ib, jp) -
                                  2.0 * c.at(static_cast<int>(iphi), iz, ib, jp) +
                                  c.at(static_cast<int>(iphi), iz - 1, ib, jp)) / (dz * dz);
                        row[jp] = d2;
                    }
                    double acc = 0.0;
                    if (c.k_weight == 1) {
                        // PV int d2C/cos(psi) dpsi on the symmetric grid
                        for (int jp = 0; jp < np; ++jp)
                            acc += row[jp] / std::cos(c.psi_nodes[jp]) * dpsi;
                    } else {
                        // FP int d2C/cos^2 = - int tan(psi) d/dpsi[d2C] dpsi
                        for (int jp = 0; jp < np; ++jp) {
                            double dd;
                            if (jp == 0)
                                dd = (-1.5 * row[0] + 2.0 * row[1] - 0.5 * row[2]) / dpsi;
                            else if (jp == np - 1)
                                dd = (1.5 * row[np - 1] - 2.0 * row[np - 2] + 0.5 * row[np - 3]) /
                                     dpsi;
                            else
                                dd = (row[jp + 1] - row[jp - 1]) / (2.0 * dpsi);
                            acc -= std::tan(c.psi_nodes[jp]) * dd * dpsi;
                        }
                    }
                    P[(iphi * nz + iz) * nb + ib] = acc;
                }
            }
        }
    });

    Volume3D vol(grid.n_x, grid.n_y, grid.n_z, grid.extent_xy, grid.z_min, grid.z_max);
    const double z0 = c.z_nodes.front(), z1 = c.z_nodes.back();
    parallel_for(static_cast<std::size_t>(grid.n_x), [&](std::size_t xb, std::size_t xe) {
        for (std::size_t ix = xb; ix < xe; ++ix) {
            for (int iy = 0; iy < grid.n_y; ++iy) {
                for (int izv = 0; izv < grid.n_z; ++izv) {
                    const double px = vol.x(static_cast<int>(ix)), py = vol.y(iy), pz = vol.z(izv);
                    double total = 0.0;
                    for (int iphi = 0; iphi < nphi; ++iphi) {
                        const double phi = c.phi(iphi);
                        for (int ib = 0; ib < nb; ++ib) {
                            const double beta = c.beta_nodes[ib];
                            const auto ax = axis_vector(phi, beta);
                            const double cb = std::cos(beta), sb = std::sin(beta);
                            const double S = ax[0] * px + ax[1] * py + ax[2] * pz;
                            const double wdir = sb * (c.k_weight == 1 ? 1.0 / cb : 1.0);
                            // PV int P/(S - z cb + sb) dz with subtraction
                            const double zstar = (S + sb) / cb;
                            double inner = 0.0;
                            const double* Pp = &P[(static_cast<std::size_t>(iphi) * nz) * nb + ib];
                            if (zstar > z0 && zstar < z1 && std::abs(cb) > 1e-9) {
                                const double fz = (zstar - z0) / dz;
                                const int l0 = std::min(static_cast<int>(fz), nz - 2);
                                const double tt = fz - l0;
                                const double Pstar =
                                    (1.0 - tt) * Pp[static_cast<std::size_t>(l0) * nb] +
                                    tt * Pp[static_cast<std::size_t>(l0 + 1) * nb];
                                for (int iz = 0; iz < nz; ++iz) {
                                    const double den = S - c.z_nodes[iz] * cb + sb;
                                    const double Pv = Pp[static_cast<std::size_t>(iz) * nb];
                                    if (std::abs(den) > 1e-12) inner += (Pv - Pstar) / den * dz;
                                }
                                inner += Pstar * (-1.0 / cb) *
                                         std::log(std::abs((S - z1 * cb + sb) /
                                                           (S - z0 * cb + sb)));
                            } else {
                                for (int iz = 0; iz < nz; ++iz) {
                                    const double den = S - c.z_nodes[iz] * cb + sb;
                                    if (std::abs(den) > 1e-12)
                                        inner += Pp[static_cast<std::size_t>(iz) * nb] / den * dz;
                                }
                            }
                            total += wdir * inner;
                        }
                    }
                    vol.at(static_cast<int>(ix), iy, izv) =
                        -total * dphi * dbeta / (8.0 * kPi * kPi * kPi * kPi);
                }
            }
        }
    });
    return vol;
}

StabilityNorms stability_norms(const Volume3D& f, const ConeData& c) {
    if (c.k_weight != 0 && c.k_weight != 1)
        throw std::invalid_argument("stability_norms: only k in {0,1}");
    if (c.z_nodes.front() > f.z_min || c.z_nodes.back() < f.z_max)
        throw std::invalid_argument("stability_norms: cone z range does not cover the volume");
    StabilityNorms out;
    const double hx = 2.0 * f.extent_xy / (f.n_x - 1);
    const double hy = 2.0 * f.extent_xy / (f.n_y - 1);
    const double hz = (f.z_max - f.z_min) / (f.n_z - 1);
    const double voxel = hx * hy * hz;
    double l2sq = 0.0;
    for (double v : f.values) l2sq += v * v;
    out.l2 = std::sqrt(l2sq * voxel);

    // Sobolev -1 surrogate through a padded 3D DFT
    const std::size_t Lx = fft::next_pow2(2 * static_cast<std::size_t>(f.n_x));
    const std::size_t Ly = fft::next_pow2(2 * static_cast<std::size_t>(f.n_y));
    const std::size_t Lz = fft::next_pow2(2 * static_cast<std::size_t>(f.n_z));
    std::vector<std::complex<double>> grid(Lx * Ly * Lz, {0.0, 0.0});
    for (int ix = 0; ix < f.n_x; ++ix)
        for (int iy = 0; iy < f.n_y; ++iy)
            for (int iz = 0; iz < f.n_z; ++iz)
                grid[(static_cast<std::size_t>(ix) * Ly + iy) * Lz + iz] = f.at(ix, iy, iz);
    // separable passes
    fft::cvec line;
    line.resize(Lz);
    for (std::size_t ix = 0; ix < Lx; ++ix)
        for (std::size_t iy = 0; iy < Ly; ++iy) {
            for (std::size_t iz = 0; iz < Lz; ++iz) line[iz] = grid[(ix * Ly + iy) * Lz + iz];
            fft::transform_pow2(line, -1);
            for (std::size_t iz = 0; iz < Lz; ++iz) grid[(ix * Ly + iy) * Lz + iz] = line[iz];
        }
    line.resize(Ly);
    for (std::size_t ix = 0; ix < Lx; ++ix)
        for (std::size_t iz = 0; iz < Lz; ++iz) {
            for (std::size_t iy = 0; iy < Ly; ++iy) line[iy] = grid[(ix * Ly + iy) * Lz + iz];
            fft::transform_pow2(line, -1);
            for (std::size_t iy = 0; iy < Ly; ++iy) grid[(ix * Ly + iy) * Lz + iz] = line[iy];
        }
    line.resize(Lx);
    for (std::size_t iy = 0; iy < Ly; ++iy)
        for (std::size_t iz = 0; iz < Lz; ++iz) {
            for (std::size_t ix = 0; ix < Lx; ++ix) line[ix] = grid[(ix * Ly + iy) * Lz + iz];
            fft::transform_pow2(line, -1);
            for (std::size_t ix = 0; ix < Lx; ++ix) grid[(ix * Ly + iy) * Lz + iz] = line[ix];
        }
    auto freq = [](std::size_t q, std::size_t L, double h) {
        const long long qi = static_cast<long long>(q);
        const long long Li = static_cast<long long>(L);
        const double fr =
            static_cast<double>(q <= L / 2 ? qi : qi - Li) / (static_cast<double>(L) * h);
        return 2.0 * kPi * fr;
    };
    double acc = 0.0;
    for (std::size_t ix = 0; ix < Lx; ++ix) {
        const double kx = freq(ix, Lx, hx);
        for (std::size_t iy = 0; iy < Ly; ++iy) {
            const double ky = freq(iy, Ly, hy);
            for (std::size_t iz = 0; iz < Lz; ++iz) {
                const double kz = freq(iz, Lz, hz);
                const double xi2 = kx * kx + ky * ky + kz * kz;
                acc += std::norm(grid[(ix * Ly + iy) * Lz + iz]) / (xi2 + 1.0);
            }
        }
    }
    // hat f = DFT * voxel under the non-unitary convention the source
    // inequality uses; d xi = (2 pi)^3/(L h)^3 per bin
    const double dxi = (2.0 * kPi / (Lx * hx)) * (2.0 * kPi / (Ly * hy)) * (2.0 * kPi / (Lz * hz));
    out.sobolev_minus_1 = std::sqrt(acc * voxel * voxel * dxi);

    // weighted data norms
    const int nphi = c.n_phi, nz = c.n_z(), nb = c.n_beta(), np = c.n_psi();
    const double dphi = 2.0 * kPi / nphi;
    const double dzc = c.dz();
    const double dbeta = nb > 1 ? c.beta_nodes[1] - c.beta_nodes[0] : kPi;
    const double dpsi = np > 1 ? c.psi_nodes[1] - c.psi_nodes[0] : kPi;
    const double cell = dphi * dzc * dbeta * dpsi;
    double normsq = 0.0, dnormsq = 0.0;
    for (int iphi = 0; iphi < nphi; ++iphi)
        for (int iz = 0; iz < nz; ++iz)
            for (int ib = 0; ib < nb; ++ib) {
                const double w = std::abs(std::cos(c.beta_nodes[ib])) * std::sin(c.beta_nodes[ib]);
                for (int jp = 0; jp < np; ++jp) {
                    const double denom =
                        c.k_weight == 1 ? std::cos(c.psi_nodes[jp])
                                        : std::cos(c.psi_nodes[jp]) * std::cos(c.psi_nodes[jp]);
                    const double v = c.at(iphi, iz, ib, jp) / denom;
                    normsq += v * v * w * cell;
                    double dv;
                    if (iz == 0)
                        dv = (c.at(iphi, 1, ib, jp) - c.at(iphi, 0, ib, jp)) / dzc;
                    else if (iz == nz - 1)
                        dv = (c.at(iphi, nz - 1, ib, jp) - c.at(iphi, nz - 2, ib, jp)) / dzc;
                    else
                        dv = (c.at(iphi, iz + 1, ib, jp) - c.at(iphi, iz - 1, ib, jp)) /
                             (2.0 * dzc);
                    dv /= denom;
                    dnormsq += dv * dv * w * cell;
                }
            }
    out.cone_norm = std::sqrt(normsq);
    out.cone_norm_1 = std::sqrt(normsq + dnormsq);
    return out;
}

} // namespace crt
