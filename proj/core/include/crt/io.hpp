#pragma once

#include "crt/grids.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace crt {

/// I/O failure with the byte offset where parsing stopped making sense.
class io_error : public std::runtime_error {
  public:
    io_error(const std::string& what, std::uint64_t offset)
        : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::uint64_t offset() const { return offset_; }

  private:
    std::uint64_t offset_;
};

enum class DataKind { Image2D, Volume3D, PolarCoefficients, VlineSinogram, ConeData, RadonData3D };

/// One parsed container file: "CRTD" magic, version 1, little-endian f64
/// payload in row-major order, and a flat JSON metadata block describing the
/// grid semantics.
struct DataFile {
    DataKind kind;
    std::vector<std::uint32_t> dims;
    std::vector<double> payload;
    std::string metadata_json;
};

void write_crtd(const std::string& path, const Image2D& img);
void write_crtd(const std::string& path, const Volume3D& vol);
void write_crtd(const std::string& path, const PolarCoefficients& p);
void write_crtd(const std::string& path, const VlineSinogram& s);
void write_crtd(const std::string& path, const ConeData& c);
void write_crtd(const std::string& path, const RadonData3D& r);

DataFile read_crtd(const std::string& path);
DataKind peek_kind(const DataFile& f);

Image2D decode_image2d(const DataFile& f);
Volume3D decode_volume3d(const DataFile& f);
PolarCoefficients decode_polar(const DataFile& f);
VlineSinogram decode_vline(const DataFile& f);
ConeData decode_cone(const DataFile& f);
RadonData3D decode_radon3d(const DataFile& f);

/// 8-bit binary PGM with a min-max window (no gamma).
void write_pgm(const std::string& path, const Image2D& img);
void write_pgm_slice(const std::string& path, const Volume3D& vol, int iz);

} // namespace crt
