#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace binmorph {

struct Dims {
    int nx = 0;
    int ny = 0;
    int nz = 0;

    std::size_t voxel_count() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(nz);
    }
    bool contains(int x, int y, int z) const {
        return x >= 0 && y >= 0 && z >= 0 && x < nx && y < ny && z < nz;
    }
    friend bool operator==(const Dims&, const Dims&) = default;
};

std::string to_string(const Dims& d);

/// Voxel edge lengths in millimeters (x, y, z).
using Spacing = std::array<double, 3>;

enum class Connectivity { six = 6, twentysix = 26 };

Connectivity connectivity_from_int(int n);

/// 2D binary mask for one slice of an exam. Pixels are row-major, one byte per
/// pixel holding 0 or 1.
struct SliceMask {
    std::string exam_id;
    int slice_index = 0;
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    SliceMask() = default;
    SliceMask(int w, int h, std::string exam = {}, int index = 0);

    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool on) { bits[static_cast<std::size_t>(y) * width + x] = on ? 1 : 0; }
    std::size_t count() const;

    friend bool operator==(const SliceMask&, const SliceMask&) = default;
};

/// Bit-packed 3D binary grid.
///
/// Storage is row-aligned: every (y, z) row of nx voxels occupies
/// words_per_row() 64-bit words, voxel x living in bit x % 64 of word x / 64.
/// Bits past nx in the last word of a row are always zero. Rows are ordered
/// r = y + ny * z, so iterating rows and bits ascending visits voxels in
/// linear index order i = x + nx * (y + ny * z).
class BinaryVolume {
public:
    using Word = std::uint64_t;
    static constexpr int kWordBits = 64;

    BinaryVolume() = default;
    explicit BinaryVolume(Dims dims, Spacing spacing_mm = {1.0, 1.0, 1.0});

    static BinaryVolume filled(Dims dims, bool value, Spacing spacing_mm = {1.0, 1.0, 1.0});
    /// Same dims and spacing as `like`, all voxels clear.
    static BinaryVolume zeros_like(const BinaryVolume& like);

    const Dims& dims() const { return dims_; }
    int nx() const { return dims_.nx; }
    int ny() const { return dims_.ny; }
    int nz() const { return dims_.nz; }
    const Spacing& spacing() const { return spacing_; }
    std::size_t voxel_count() const { return dims_.voxel_count(); }

    bool get(int x, int y, int z) const {
        const Word w = words_[row_offset(y, z) + static_cast<std::size_t>(x / kWordBits)];
        return (w >> (x % kWordBits)) & 1U;
    }
    void set(int x, int y, int z, bool on) {
        Word& w = words_[row_offset(y, z) + static_cast<std::size_t>(x / kWordBits)];
        const Word bit = Word{1} << (x % kWordBits);
        w = on ? (w | bit) : (w & ~bit);
    }
    /// Bounds-checked read; outside the grid reads as background.
    bool get_or_zero(int x, int y, int z) const { return dims_.contains(x, y, z) && get(x, y, z); }

    int words_per_row() const { return words_per_row_; }
    std::size_t row_count() const { return static_cast<std::size_t>(dims_.ny) * dims_.nz; }
    std::span<const Word> row(int y, int z) const {
        return {words_.data() + row_offset(y, z), static_cast<std::size_t>(words_per_row_)};
    }
    std::span<Word> row(int y, int z) {
        return {words_.data() + row_offset(y, z), static_cast<std::size_t>(words_per_row_)};
    }
    std::span<const Word> row(std::size_t r) const {
        return {words_.data() + r * words_per_row_, static_cast<std::size_t>(words_per_row_)};
    }
    std::span<Word> row(std::size_t r) {
        return {words_.data() + r * words_per_row_, static_cast<std::size_t>(words_per_row_)};
    }
    std::span<const Word> words() const { return words_; }
    std::span<Word> words() { return words_; }

    /// Mask of valid bits in the last word of each row.
    Word tail_mask() const { return tail_mask_; }

    std::size_t count() const;
    bool empty() const { return count() == 0; }

    /// Payload in linear bit order: bit i of the stream at byte i / 8,
    /// position i % 8, LSB first. Trailing pad bits are zero.
    std::vector<std::uint8_t> pack_linear() const;
    /// Inverse of pack_linear. Pad bits are ignored.
    static BinaryVolume unpack_linear(Dims dims, Spacing spacing_mm, std::span<const std::uint8_t> payload);

    friend bool operator==(const BinaryVolume& a, const BinaryVolume& b) {
        return a.dims_ == b.dims_ && a.spacing_ == b.spacing_ && a.words_ == b.words_;
    }

private:
    std::size_t row_offset(int y, int z) const {
        return (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims_.ny) * z) * words_per_row_;
    }

    Dims dims_;
    Spacing spacing_{1.0, 1.0, 1.0};
    int words_per_row_ = 0;
    Word tail_mask_ = 0;
    std::vector<Word> words_;
};

/// Voxelwise relations and set algebra. Operands must share dims.
bool same_grid(const BinaryVolume& a, const BinaryVolume& b);
bool is_subset(const BinaryVolume& a, const BinaryVolume& b);
BinaryVolume intersect(const BinaryVolume& a, const BinaryVolume& b);
BinaryVolume unite(const BinaryVolume& a, const BinaryVolume& b);
BinaryVolume difference(const BinaryVolume& a, const BinaryVolume& b);

BinaryVolume complement(const BinaryVolume& v);
std::size_t count_foreground(const BinaryVolume& v);

/// Stacks slices along z. Slices must share width, height and exam_id, and
/// their indices must be exactly 0..n-1 (any order).
BinaryVolume assemble_volume(std::span<const SliceMask> slices, Spacing spacing_mm);

/// Plane z of a volume as a slice mask.
SliceMask extract_slice(const BinaryVolume& v, int z, std::string exam_id = {});

/// Nearest-neighbor resize with pixel-center sampling.
SliceMask resample_mask(const SliceMask& mask, int new_width, int new_height);

}  // namespace binmorph
