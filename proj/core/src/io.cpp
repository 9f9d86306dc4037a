#include "crt/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>

namespace crt {

using json = nlohmann::json;

namespace {

const char kMagic[4] = {'C', 'R', 'T', 'D'};
constexpr std::uint16_t kVersion = 1;

void put_bytes(std::string& out, const void* p, std::size_t n) {
    out.append(static_cast<const char*>(p), n);
}

template <typename T>
void put_le(std::string& out, T v) {
    // this code targets little-endian hosts; keep the byte order explicit
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(reinterpret_cast<char*>(buf), sizeof(T));
}

std::string kind_name(DataKind k) {
    switch (k) {
        case DataKind::Image2D: return "image2d";
        case DataKind::Volume3D: return "volume3d";
        case DataKind::PolarCoefficients: return "polar_coeffs";
        case DataKind::VlineSinogram: return "vline_sinogram";
        case DataKind::ConeData: return "cone_data";
        case DataKind::RadonData3D: return "radon3d";
    }
    return "?";
}

DataKind kind_from_name(const std::string& s, std::uint64_t off) {
    if (s == "image2d") return DataKind::Image2D;
    if (s == "volume3d") return DataKind::Volume3D;
    if (s == "polar_coeffs") return DataKind::PolarCoefficients;
    if (s == "vline_sinogram") return DataKind::VlineSinogram;
    if (s == "cone_data") return DataKind::ConeData;
    if (s == "radon3d") return DataKind::RadonData3D;
    throw io_error("unknown container kind '" + s + "'", off);
}

void write_file(const std::string& path, const std::vector<std::uint32_t>& dims,
                const std::vector<double>& payload, const json& meta) {
    std::size_t expect = 1;
    for (auto d : dims) expect *= d;
    if (expect != payload.size()) throw io_error("payload size does not match dims", 0);
    std::string out;
    put_bytes(out, kMagic, 4);
    put_le<std::uint16_t>(out, kVersion);
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(dims.size()));
    for (auto d : dims) put_le<std::uint32_t>(out, d);
    put_bytes(out, payload.data(), payload.size() * sizeof(double));
    const std::string m = meta.dump();
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.size()));
    out.append(m);

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw io_error("cannot open '" + path + "' for writing", 0);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw io_error("short write to '" + path + "'", out.size());
}

json node_list(const std::vector<double>& v) { return json(v); }

std::vector<double> meta_nodes(const json& meta, const char* key, std::uint64_t off) {
    if (!meta.contains(key)) throw io_error(std::string("metadata missing '") + key + "'", off);
    return meta.at(key).get<std::vector<double>>();
}

} // namespace

void write_crtd(const std::string& path, const Image2D& img) {
    json meta{{"kind", kind_name(DataKind::Image2D)}, {"extent", img.extent}};
    write_file(path, {static_cast<std::uint32_t>(img.n_x), static_cast<std::uint32_t>(img.n_y)},
               img.values, meta);
}

void write_crtd(const std::string& path, const Volume3D& vol) {
    json meta{{"kind", kind_name(DataKind::Volume3D)},
              {"extent_xy", vol.extent_xy},
              {"z_min", vol.z_min},
              {"z_max", vol.z_max}};
    write_file(path,
               {static_cast<std::uint32_t>(vol.n_x), static_cast<std::uint32_t>(vol.n_y),
                static_cast<std::uint32_t>(vol.n_z)},
               vol.values, meta);
}

void write_crtd(const std::string& path, const PolarCoefficients& p) {
    std::vector<double> payload;
    payload.reserve(p.coeffs.size() * 2);
    for (const auto& c : p.coeffs) {
        payload.push_back(c.real());
        payload.push_back(c.imag());
    }
    json meta{{"kind", kind_name(DataKind::PolarCoefficients)}, {"n_max", p.n_max}, {"m", p.m}};
    write_file(path,
               {static_cast<std::uint32_t>(2 * p.n_max + 1), static_cast<std::uint32_t>(p.m + 1),
                2u},
               payload, meta);
}

void write_crtd(const std::string& path, const VlineSinogram& s) {
    json meta{{"kind", kind_name(DataKind::VlineSinogram)},
              {"n_phi", s.n_phi},
              {"psi_nodes", node_list(s.psi_nodes)}};
    write_file(path,
               {static_cast<std::uint32_t>(s.n_phi), static_cast<std::uint32_t>(s.n_psi())},
               s.data, meta);
}

void write_crtd(const std::string& path, const ConeData& c) {
    json meta{{"kind", kind_name(DataKind::ConeData)},
              {"k_weight", c.k_weight},
              {"n_phi", c.n_phi},
              {"z_nodes", node_list(c.z_nodes)},
              {"beta_nodes", node_list(c.beta_nodes)},
              {"psi_nodes", node_list(c.psi_nodes)}};
    write_file(path,
               {static_cast<std::uint32_t>(c.n_phi), static_cast<std::uint32_t>(c.n_z()),
                static_cast<std::uint32_t>(c.n_beta()), static_cast<std::uint32_t>(c.n_psi())},
               c.data, meta);
}

void write_crtd(const std::string& path, const RadonData3D& r) {
    json meta{{"kind", kind_name(DataKind::RadonData3D)},
              {"n_phi", r.n_phi},
              {"beta_nodes", node_list(r.beta_nodes)},
              {"s_nodes", node_list(r.s_nodes)}};
    write_file(path,
               {static_cast<std::uint32_t>(r.n_phi), static_cast<std::uint32_t>(r.n_beta()),
                static_cast<std::uint32_t>(r.n_s())},
               r.data, meta);
}

DataFile read_crtd(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open '" + path + "'", 0);
    std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    std::uint64_t off = 0;
    auto need = [&](std::size_t n, const char* what) {
        if (off + n > buf.size())
            throw io_error(std::string("truncated file while reading ") + what, off);
    };
    need(4, "magic");
    if (std::memcmp(buf.data(), kMagic, 4) != 0) throw io_error("bad magic, not a CRTD file", 0);
    off = 4;
    auto get_u16 = [&](const char* what) {
        need(2, what);
        std::uint16_t v;
        std::memcpy(&v, buf.data() + off, 2);
        off += 2;
        return v;
    };
    auto get_u32 = [&](const char* what) {
        need(4, what);
        std::uint32_t v;
        std::memcpy(&v, buf.data() + off, 4);
        off += 4;
        return v;
    };
    const std::uint16_t version = get_u16("version");
    if (version != kVersion) throw io_error("unsupported version " + std::to_string(version), 4);
    const std::uint16_t ndim = get_u16("ndim");
    if (ndim == 0 || ndim > 8) throw io_error("implausible ndim " + std::to_string(ndim), 6);
    DataFile out;
    out.dims.resize(ndim);
    std::size_t count = 1;
    for (int i = 0; i < ndim; ++i) {
        out.dims[i] = get_u32("dims");
        count *= out.dims[i];
    }
    need(count * sizeof(double), "payload");
    out.payload.resize(count);
    std::memcpy(out.payload.data(), buf.data() + off, count * sizeof(double));
    off += count * sizeof(double);
    const std::uint32_t mlen = get_u32("metadata length");
    need(mlen, "metadata");
    out.metadata_json.assign(buf.data() + off, mlen);
    std::uint64_t moff = off;
    off += mlen;
    json meta;
    try {
        meta = json::parse(out.metadata_json);
    } catch (const std::exception& e) {
        throw io_error(std::string("metadata is not valid JSON: ") + e.what(), moff);
    }
    if (!meta.is_object()) throw io_error("metadata must be a JSON object", moff);
    if (!meta.contains("kind")) throw io_error("metadata missing 'kind'", moff);
    out.kind = kind_from_name(meta["kind"].get<std::string>(), moff);
    return out;
}

DataKind peek_kind(const DataFile& f) { return f.kind; }

Image2D decode_image2d(const DataFile& f) {
    if (f.kind != DataKind::Image2D || f.dims.size() != 2)
        throw io_error("expected an image2d container", 0);
    json meta = json::parse(f.metadata_json);
    Image2D img(static_cast<int>(f.dims[0]), static_cast<int>(f.dims[1]),
                meta.value("extent", 1.0));
    img.values = f.payload;
    return img;
}

Volume3D decode_volume3d(const DataFile& f) {
    if (f.kind != DataKind::Volume3D || f.dims.size() != 3)
        throw io_error("expected a volume3d container", 0);
    json meta = json::parse(f.metadata_json);
    Volume3D vol(static_cast<int>(f.dims[0]), static_cast<int>(f.dims[1]),
                 static_cast<int>(f.dims[2]), meta.value("extent_xy", 1.0),
                 meta.value("z_min", -1.0), meta.value("z_max", 1.0));
    vol.values = f.payload;
    return vol;
}

PolarCoefficients decode_polar(const DataFile& f) {
    if (f.kind != DataKind::PolarCoefficients || f.dims.size() != 3 || f.dims[2] != 2)
        throw io_error("expected a polar_coeffs container", 0);
    json meta = json::parse(f.metadata_json);
    PolarCoefficients p(meta.at("n_max").get<int>(), meta.at("m").get<int>());
    if (f.payload.size() != p.coeffs.size() * 2)
        throw io_error("polar_coeffs payload size mismatch", 0);
    for (std::size_t i = 0; i < p.coeffs.size(); ++i)
        p.coeffs[i] = {f.payload[2 * i], f.payload[2 * i + 1]};
    return p;
}

VlineSinogram decode_vline(const DataFile& f) {
    if (f.kind != DataKind::VlineSinogram || f.dims.size() != 2)
        throw io_error("expected a vline_sinogram container", 0);
    json meta = json::parse(f.metadata_json);
    VlineSinogram s(meta.at("n_phi").get<int>(), meta_nodes(meta, "psi_nodes", 0));
    if (s.data.size() != f.payload.size()) throw io_error("sinogram payload size mismatch", 0);
    s.data = f.payload;
    return s;
}

ConeData decode_cone(const DataFile& f) {
    if (f.kind != DataKind::ConeData || f.dims.size() != 4)
        throw io_error("expected a cone_data container", 0);
    json meta = json::parse(f.metadata_json);
    ConeData c(meta.at("k_weight").get<int>(), meta.at("n_phi").get<int>(),
               meta_nodes(meta, "z_nodes", 0), meta_nodes(meta, "beta_nodes", 0),
               meta_nodes(meta, "psi_nodes", 0));
    if (c.data.size() != f.payload.size()) throw io_error("cone payload size mismatch", 0);
    c.data = f.payload;
    return c;
}

RadonData3D decode_radon3d(const DataFile& f) {
    if (f.kind != DataKind::RadonData3D || f.dims.size() != 3)
        throw io_error("expected a radon3d container", 0);
    json meta = json::parse(f.metadata_json);
    RadonData3D r(meta.at("n_phi").get<int>(), meta_nodes(meta, "beta_nodes", 0),
                  meta_nodes(meta, "s_nodes", 0));
    if (r.data.size() != f.payload.size()) throw io_error("radon payload size mismatch", 0);
    r.data = f.payload;
    return r;
}

namespace {
void write_pgm_raw(const std::string& path, int w, int h,
                   const std::function<double(int, int)>& pix) {
    double lo = 1e300, hi = -1e300;
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < w; ++i) {
            const double v = pix(i, j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw io_error("cannot open '" + path + "' for writing", 0);
    f << "P5\n" << w << " " << h << "\n255\n";
    std::string row(static_cast<std::size_t>(w), '\0');
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
            int g = static_cast<int>(std::lround((pix(i, j) - lo) * scale));
            row[static_cast<std::size_t>(i)] = static_cast<char>(std::clamp(g, 0, 255));
        }
        f.write(row.data(), w);
    }
    if (!f) throw io_error("short write to '" + path + "'", 0);
}
} // namespace

void write_pgm(const std::string& path, const Image2D& img) {
    // image row 0 of the file is the top of the picture (+y)
    write_pgm_raw(path, img.n_x, img.n_y,
                  [&](int i, int j) { return img.at(i, img.n_y - 1 - j); });
}

void write_pgm_slice(const std::string& path, const Volume3D& vol, int iz) {
    if (iz < 0 || iz >= vol.n_z) throw io_error("slice index out of range", 0);
    write_pgm_raw(path, vol.n_x, vol.n_y,
                  [&](int i, int j) { return vol.at(i, vol.n_y - 1 - j, iz); });
}

} // namespace crt
