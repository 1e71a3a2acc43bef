#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "binmorph/volume.hpp"

namespace binmorph {

/// Malformed or truncated file content.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`, so the
/// destination is either absent, untouched, or complete.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Slice masks: binary PGM ("P5", maxval 255). Pixels >= 128 read as 1;
// 1 is written as 255.
std::string encode_pgm(const SliceMask& mask);
SliceMask decode_pgm(std::string_view bytes);
SliceMask read_slice_mask(const std::filesystem::path& path);
void write_slice_mask(const SliceMask& mask, const std::filesystem::path& path);

// Volumes: BVOL. Four ASCII header lines
//   BVOL1
//   dims <nx> <ny> <nz>
//   spacing <sx> <sy> <sz>
//   data bitpacked
// then ceil(nx*ny*nz / 8) payload bytes, voxel i = x + nx*(y + ny*z) in byte
// i / 8 at bit i % 8 (LSB first), pad bits zero.
std::string encode_bvol(const BinaryVolume& v);
/// Nonzero pad bits are tolerated; a message is appended to `warnings` when
/// it is non-null.
BinaryVolume decode_bvol(std::string_view bytes, std::vector<std::string>* warnings = nullptr);
BinaryVolume read_volume(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);
void write_volume(const BinaryVolume& v, const std::filesystem::path& path);

/// Shortest decimal that round-trips, locale-independent. Integral values
/// keep a trailing ".0".
std::string format_number(double value);
/// Fixed-point with `digits` decimals, locale-independent.
std::string format_fixed(double value, int digits);
/// Strict parse of a whole token; throws FormatError.
double parse_double(std::string_view token, std::string_view what);
long long parse_int(std::string_view token, std::string_view what);

}  // namespace binmorph
