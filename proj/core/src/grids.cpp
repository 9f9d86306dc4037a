#include "crt/grids.hpp"

#include "crt/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace crt {

namespace {
constexpr double kPi = std::numbers::pi;

void check_positive(int v, const char* what) {
    if (v < 1) throw std::invalid_argument(std::string(what) + " must be positive");
}
} // namespace

Image2D::Image2D(int nx, int ny, double ext) : n_x(nx), n_y(ny), extent(ext) {
    if (nx < 3 || ny < 3) throw std::invalid_argument("Image2D: grid sizes must be >= 3");
    if (!(ext > 0.0)) throw std::invalid_argument("Image2D: extent must be positive");
    values.assign(static_cast<std::size_t>(nx) * ny, 0.0);
}

double Image2D::sample(double px, double py) const {
    const double hx = 2.0 * extent / (n_x - 1);
    const double hy = 2.0 * extent / (n_y - 1);
    const double fx = (px + extent) / hx;
    const double fy = (py + extent) / hy;
    if (fx < 0.0 || fy < 0.0 || fx > n_x - 1 || fy > n_y - 1) return 0.0;
    int ix = static_cast<int>(fx);
    int iy = static_cast<int>(fy);
    if (ix >= n_x - 1) ix = n_x - 2;
    if (iy >= n_y - 1) iy = n_y - 2;
    const double tx = fx - ix;
    const double ty = fy - iy;
    const double v00 = at(ix, iy), v10 = at(ix + 1, iy);
    const double v01 = at(ix, iy + 1), v11 = at(ix + 1, iy + 1);
    return (1 - tx) * ((1 - ty) * v00 + ty * v01) + tx * ((1 - ty) * v10 + ty * v11);
}

Volume3D::Volume3D(int nx, int ny, int nz, double ext_xy, double zmin, double zmax)
    : n_x(nx), n_y(ny), n_z(nz), extent_xy(ext_xy), z_min(zmin), z_max(zmax) {
    if (nx < 3 || ny < 3 || nz < 3) throw std::invalid_argument("Volume3D: grid sizes must be >= 3");
    if (!(zmin < zmax)) throw std::invalid_argument("Volume3D: z_min must be < z_max");
    if (!(ext_xy > 0.0)) throw std::invalid_argument("Volume3D: extent_xy must be positive");
    values.assign(static_cast<std::size_t>(nx) * ny * nz, 0.0);
}

double Volume3D::sample(double px, double py, double pz) const {
    const double hx = 2.0 * extent_xy / (n_x - 1);
    const double hy = 2.0 * extent_xy / (n_y - 1);
    const double hz = (z_max - z_min) / (n_z - 1);
    const double fx = (px + extent_xy) / hx;
    const double fy = (py + extent_xy) / hy;
    const double fz = (pz - z_min) / hz;
    if (fx < 0.0 || fy < 0.0 || fz < 0.0 || fx > n_x - 1 || fy > n_y - 1 || fz > n_z - 1)
        return 0.0;
    int ix = static_cast<int>(fx), iy = static_cast<int>(fy), iz = static_cast<int>(fz);
    if (ix >= n_x - 1) ix = n_x - 2;
    if (iy >= n_y - 1) iy = n_y - 2;
    if (iz >= n_z - 1) iz = n_z - 2;
    const double tx = fx - ix, ty = fy - iy, tz = fz - iz;
    double acc = 0.0;
    for (int dx = 0; dx <= 1; ++dx)
        for (int dy = 0; dy <= 1; ++dy)
            for (int dzi = 0; dzi <= 1; ++dzi) {
                double w = (dx ? tx : 1 - tx) * (dy ? ty : 1 - ty) * (dzi ? tz : 1 - tz);
                acc += w * at(ix + dx, iy + dy, iz + dzi);
            }
    return acc;
}

PolarCoefficients::PolarCoefficients(int nmax, int m_) : n_max(nmax), m(m_) {
    check_positive(nmax, "PolarCoefficients n_max");
    check_positive(m_, "PolarCoefficients m");
    coeffs.assign(static_cast<std::size_t>(2 * nmax + 1) * (m_ + 1), {0.0, 0.0});
}

VlineSinogram::VlineSinogram(int nphi, std::vector<double> psis)
    : n_phi(nphi), psi_nodes(std::move(psis)) {
    if (nphi < 1) throw std::invalid_argument("VlineSinogram: n_phi must be positive");
    if (psi_nodes.empty()) throw std::invalid_argument("VlineSinogram: empty psi grid");
    for (std::size_t j = 0; j < psi_nodes.size(); ++j) {
        if (!(psi_nodes[j] > 0.0 && psi_nodes[j] < kPi / 2))
            throw std::invalid_argument("VlineSinogram: psi nodes must lie strictly in (0, pi/2)");
        if (j > 0 && !(psi_nodes[j] > psi_nodes[j - 1]))
            throw std::invalid_argument("VlineSinogram: psi nodes must be strictly increasing");
    }
    data.assign(static_cast<std::size_t>(nphi) * psi_nodes.size(), 0.0);
}

double VlineSinogram::phi(int k) const { return 2.0 * kPi * k / n_phi; }

std::vector<double> VlineSinogram::arcsin_grid(int n) {
    if (n < 2) throw std::invalid_argument("arcsin_grid: need at least 2 nodes");
    std::vector<double> psis(n);
    for (int j = 0; j < n; ++j)
        psis[j] = std::asin(static_cast<double>(j + 1) / (n + 1));
    return psis;
}

ConeData::ConeData(int k, int nphi, std::vector<double> zs, std::vector<double> betas,
                   std::vector<double> psis)
    : k_weight(k), n_phi(nphi), z_nodes(std::move(zs)), beta_nodes(std::move(betas)),
      psi_nodes(std::move(psis)) {
    if (k < 0) throw std::invalid_argument("ConeData: k_weight must be >= 0");
    if (nphi < 1) throw std::invalid_argument("ConeData: n_phi must be positive");
    if (z_nodes.size() < 2) throw std::invalid_argument("ConeData: need at least 2 z nodes");
    const double step = z_nodes[1] - z_nodes[0];
    for (std::size_t i = 1; i < z_nodes.size(); ++i) {
        if (std::abs((z_nodes[i] - z_nodes[i - 1]) - step) > 1e-9 * std::max(1.0, std::abs(step)))
            throw std::invalid_argument("ConeData: z grid must be uniform");
    }
    auto check_open = [](const std::vector<double>& g, const char* name) {
        if (g.empty()) throw std::invalid_argument(std::string("ConeData: empty ") + name);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!(g[i] > 0.0 && g[i] < kPi))
                throw std::invalid_argument(std::string("ConeData: ") + name +
                                            " grid must stay strictly inside (0, pi)");
            if (i > 0 && !(g[i] > g[i - 1]))
                throw std::invalid_argument(std::string("ConeData: ") + name +
                                            " grid must be strictly increasing");
        }
    };
    check_open(beta_nodes, "beta");
    check_open(psi_nodes, "psi");
    data.assign(static_cast<std::size_t>(nphi) * z_nodes.size() * beta_nodes.size() *
                    psi_nodes.size(),
                0.0);
}

double ConeData::phi(int k) const { return 2.0 * kPi * k / n_phi; }

std::vector<double> ConeData::midpoint_grid(int n) {
    if (n < 1) throw std::invalid_argument("midpoint_grid: need at least 1 node");
    std::vector<double> g(n);
    for (int j = 0; j < n; ++j) g[j] = kPi * (j + 0.5) / n;
    return g;
}

std::vector<double> ConeData::uniform_z(int n, double z0, double z1) {
    if (n < 2 || !(z0 < z1)) throw std::invalid_argument("uniform_z: bad grid request");
    std::vector<double> g(n);
    for (int j = 0; j < n; ++j) g[j] = z0 + (z1 - z0) * j / (n - 1);
    return g;
}

RadonData3D::RadonData3D(int nphi, std::vector<double> betas, std::vector<double> ss)
    : n_phi(nphi), beta_nodes(std::move(betas)), s_nodes(std::move(ss)) {
    if (nphi < 1) throw std::invalid_argument("RadonData3D: n_phi must be positive");
    if (s_nodes.size() < 2) throw std::invalid_argument("RadonData3D: need at least 2 s nodes");
    const double step = s_nodes[1] - s_nodes[0];
    for (std::size_t i = 1; i < s_nodes.size(); ++i)
        if (std::abs((s_nodes[i] - s_nodes[i - 1]) - step) > 1e-9)
            throw std::invalid_argument("RadonData3D: s grid must be uniform");
    data.assign(static_cast<std::size_t>(nphi) * beta_nodes.size() * s_nodes.size(), 0.0);
}

Image2D polar_to_cartesian(const PolarCoefficients& p, int n_x) {
    if (n_x < 3) throw std::invalid_argument("polar_to_cartesian: n_x must be >= 3");
    Image2D img(n_x, n_x, 1.0);
    const int nmax = p.n_max;
    const int m = p.m;
    for (int ix = 0; ix < n_x; ++ix) {
        const double px = img.x(ix);
        for (int iy = 0; iy < n_x; ++iy) {
            const double py = img.y(iy);
            const double r = std::hypot(px, py);
            if (r > 1.0) continue;
            // radial linear interpolation of every order at this radius
            double fr = r * m;
            int i0 = static_cast<int>(fr);
            if (i0 >= m) i0 = m - 1;
            const double t = fr - i0;
            const double phi = std::atan2(py, px);
            // Horner in w = e^{i phi}: sum_n c_n w^n = w^{-nmax} * sum c ascending
            const std::complex<double> w(std::cos(phi), std::sin(phi));
            std::complex<double> acc(0.0, 0.0);
            for (int n = nmax; n >= -nmax; --n) {
                std::complex<double> cn =
                    (1.0 - t) * p.at(n, i0) + t * p.at(n, i0 + 1);
                acc = acc * w + cn;
            }
            // acc = sum_n c_n w^{n + nmax}; undo the shift
            std::complex<double> wneg = std::pow(std::complex<double>(std::cos(phi), -std::sin(phi)),
                                                 nmax);
            img.at(ix, iy) = (acc * wneg).real();
        }
    }
    return img;
}

PolarCoefficients cartesian_to_polar(const Image2D& img, int n_max, int m) {
    if (n_max < 1 || m < 1)
        throw std::invalid_argument("cartesian_to_polar: n_max and m must be >= 1");
    PolarCoefficients p(n_max, m);
    std::size_t L = fft::next_pow2(std::max<std::size_t>(4 * static_cast<std::size_t>(n_max), 256));
    fft::cvec ring(L);
    for (int i = 0; i <= m; ++i) {
        const double r = p.radius(i);
        for (std::size_t l = 0; l < L; ++l) {
            const double phi = 2.0 * kPi * static_cast<double>(l) / static_cast<double>(L);
            ring[l] = {img.sample(r * std::cos(phi), r * std::sin(phi)), 0.0};
        }
        fft::transform_pow2(ring, -1);
        for (int n = -n_max; n <= n_max; ++n) {
            std::size_t bin = static_cast<std::size_t>((n % static_cast<int>(L) + static_cast<int>(L)) %
                                                       static_cast<int>(L));
            p.at(n, i) = ring[bin] / static_cast<double>(L);
        }
    }
    // support strictly inside the unit disc: pin the r = 1 ring
    for (int n = -n_max; n <= n_max; ++n) p.at(n, m) = 0.0;
    return p;
}

double l2_norm(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

double rel_l2_error(const std::vector<double>& approx, const std::vector<double>& exact) {
    if (approx.size() != exact.size())
        throw std::invalid_argument("rel_l2_error: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < approx.size(); ++i) {
        const double d = approx[i] - exact[i];
        num += d * d;
        den += exact[i] * exact[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

} // namespace crt
