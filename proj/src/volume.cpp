#include "binmorph/volume.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace binmorph {

std::string to_string(const Dims& d) {
    return std::to_string(d.nx) + "x" + std::to_string(d.ny) + "x" + std::to_string(d.nz);
}

Connectivity connectivity_from_int(int n) {
    switch (n) {
        case 6: return Connectivity::six;
        case 26: return Connectivity::twentysix;
        default: throw std::invalid_argument("connectivity must be 6 or 26, got " + std::to_string(n));
    }
}

SliceMask::SliceMask(int w, int h, std::string exam, int index)
    : exam_id(std::move(exam)), slice_index(index), width(w), height(h) {
    if (w <= 0 || h <= 0) {
        throw std::invalid_argument("slice mask dimensions must be positive");
    }
    if (index < 0) {
        throw std::invalid_argument("slice index must be non-negative");
    }
    bits.assign(static_cast<std::size_t>(w) * h, 0);
}

std::size_t SliceMask::count() const {
    return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; }));
}

BinaryVolume::BinaryVolume(Dims dims, Spacing spacing_mm) : dims_(dims), spacing_(spacing_mm) {
    if (dims.nx <= 0 || dims.ny <= 0 || dims.nz <= 0) {
        throw std::invalid_argument("volume dimensions must be positive, got " + to_string(dims));
    }
    for (double s : spacing_mm) {
        if (!std::isfinite(s) || s <= 0.0) {
            throw std::invalid_argument("voxel spacing must be positive and finite");
        }
    }
    words_per_row_ = (dims.nx + kWordBits - 1) / kWordBits;
    const int tail_bits = dims.nx % kWordBits;
    tail_mask_ = tail_bits == 0 ? ~Word{0} : (Word{1} << tail_bits) - 1;
    words_.assign(row_count() * words_per_row_, 0);
}

BinaryVolume BinaryVolume::filled(Dims dims, bool value, Spacing spacing_mm) {
    BinaryVolume v(dims, spacing_mm);
    if (value) {
        std::fill(v.words_.begin(), v.words_.end(), ~Word{0});
        for (std::size_t r = 0; r < v.row_count(); ++r) {
            v.row(r).back() &= v.tail_mask_;
        }
    }
    return v;
}

BinaryVolume BinaryVolume::zeros_like(const BinaryVolume& like) {
    return BinaryVolume(like.dims_, like.spacing_);
}

std::size_t BinaryVolume::count() const {
    std::size_t n = 0;
    for (Word w : words_) {
        n += static_cast<std::size_t>(std::popcount(w));
    }
    return n;
}

std::vector<std::uint8_t> BinaryVolume::pack_linear() const {
    std::vector<std::uint8_t> out((voxel_count() + 7) / 8, 0);
    std::size_t i = 0;
    for (std::size_t r = 0; r < row_count(); ++r) {
        auto words = row(r);
        for (int x = 0; x < dims_.nx; ++x, ++i) {
            if ((words[x / kWordBits] >> (x % kWordBits)) & 1U) {
                out[i / 8] |= static_cast<std::uint8_t>(1U << (i % 8));
            }
        }
    }
    return out;
}

BinaryVolume BinaryVolume::unpack_linear(Dims dims, Spacing spacing_mm, std::span<const std::uint8_t> payload) {
    BinaryVolume v(dims, spacing_mm);
    if (payload.size() != (v.voxel_count() + 7) / 8) {
        throw std::invalid_argument("bit-packed payload has " + std::to_string(payload.size()) +
                                    " bytes, expected " + std::to_string((v.voxel_count() + 7) / 8));
    }
    std::size_t i = 0;
    for (std::size_t r = 0; r < v.row_count(); ++r) {
        auto words = v.row(r);
        for (int x = 0; x < dims.nx; ++x, ++i) {
            if ((payload[i / 8] >> (i % 8)) & 1U) {
                words[x / kWordBits] |= Word{1} << (x % kWordBits);
            }
        }
    }
    return v;
}

bool same_grid(const BinaryVolume& a, const BinaryVolume& b) {
    return a.dims() == b.dims();
}

namespace {

void require_same_grid(const BinaryVolume& a, const BinaryVolume& b, const char* what) {
    if (!same_grid(a, b)) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch " + to_string(a.dims()) + " vs " +
                                    to_string(b.dims()));
    }
}

template <typename Op>
BinaryVolume combine(const BinaryVolume& a, const BinaryVolume& b, const char* what, Op op) {
    require_same_grid(a, b, what);
    BinaryVolume out = BinaryVolume::zeros_like(a);
    auto aw = a.words();
    auto bw = b.words();
    auto ow = out.words();
    for (std::size_t i = 0; i < ow.size(); ++i) {
        ow[i] = op(aw[i], bw[i]);
    }
    return out;
}

}  // namespace

bool is_subset(const BinaryVolume& a, const BinaryVolume& b) {
    require_same_grid(a, b, "is_subset");
    auto aw = a.words();
    auto bw = b.words();
    for (std::size_t i = 0; i < aw.size(); ++i) {
        if (aw[i] & ~bw[i]) {
            return false;
        }
    }
    return true;
}

BinaryVolume intersect(const BinaryVolume& a, const BinaryVolume& b) {
    return combine(a, b, "intersect", [](auto x, auto y) { return x & y; });
}

BinaryVolume unite(const BinaryVolume& a, const BinaryVolume& b) {
    return combine(a, b, "unite", [](auto x, auto y) { return x | y; });
}

BinaryVolume difference(const BinaryVolume& a, const BinaryVolume& b) {
    return combine(a, b, "difference", [](auto x, auto y) { return x & ~y; });
}

BinaryVolume complement(const BinaryVolume& v) {
    BinaryVolume out = BinaryVolume::zeros_like(v);
    for (std::size_t r = 0; r < v.row_count(); ++r) {
        auto src = v.row(r);
        auto dst = out.row(r);
        for (std::size_t k = 0; k < src.size(); ++k) {
            dst[k] = ~src[k];
        }
        dst.back() &= v.tail_mask();
    }
    return out;
}

std::size_t count_foreground(const BinaryVolume& v) {
    return v.count();
}

BinaryVolume assemble_volume(std::span<const SliceMask> slices, Spacing spacing_mm) {
    if (slices.empty()) {
        throw std::invalid_argument("assemble_volume: empty slice collection");
    }
    const SliceMask& first = slices.front();
    const int n = static_cast<int>(slices.size());
    std::vector<const SliceMask*> by_index(slices.size(), nullptr);
    for (const SliceMask& s : slices) {
        if (s.width != first.width || s.height != first.height) {
            throw std::invalid_argument("assemble_volume: slice " + std::to_string(s.slice_index) + " is " +
                                        std::to_string(s.width) + "x" + std::to_string(s.height) + ", expected " +
                                        std::to_string(first.width) + "x" + std::to_string(first.height));
        }
        if (s.exam_id != first.exam_id) {
            throw std::invalid_argument("assemble_volume: slices belong to different exams ('" + first.exam_id +
                                        "' and '" + s.exam_id + "')");
        }
        if (s.slice_index < 0 || s.slice_index >= n) {
            throw std::invalid_argument("assemble_volume: slice index " + std::to_string(s.slice_index) +
                                        " outside 0.." + std::to_string(n - 1) + " (missing slices?)");
        }
        if (by_index[s.slice_index] != nullptr) {
            throw std::invalid_argument("assemble_volume: duplicate slice index " + std::to_string(s.slice_index));
        }
        by_index[s.slice_index] = &s;
    }

    BinaryVolume v(Dims{first.width, first.height, n}, spacing_mm);
    for (int z = 0; z < n; ++z) {
        const SliceMask& s = *by_index[z];
        for (int y = 0; y < s.height; ++y) {
            for (int x = 0; x < s.width; ++x) {
                if (s.at(x, y)) {
                    v.set(x, y, z, true);
                }
            }
        }
    }
    return v;
}

SliceMask extract_slice(const BinaryVolume& v, int z, std::string exam_id) {
    if (z < 0 || z >= v.nz()) {
        throw std::out_of_range("extract_slice: z=" + std::to_string(z) + " outside volume");
    }
    SliceMask s(v.nx(), v.ny(), std::move(exam_id), z);
    for (int y = 0; y < v.ny(); ++y) {
        for (int x = 0; x < v.nx(); ++x) {
            s.set(x, y, v.get(x, y, z));
        }
    }
    return s;
}

SliceMask resample_mask(const SliceMask& mask, int new_width, int new_height) {
    if (new_width <= 0 || new_height <= 0) {
        throw std::invalid_argument("resample_mask: target dimensions must be positive");
    }
    SliceMask out(new_width, new_height, mask.exam_id, mask.slice_index);
    // Source index floor((u + 0.5) * w / W), evaluated in integers.
    const auto src_index = [](int u, int src, int dst) {
        return static_cast<int>((2 * static_cast<std::int64_t>(u) + 1) * src / (2 * static_cast<std::int64_t>(dst)));
    };
    std::vector<int> src_x(new_width);
    for (int u = 0; u < new_width; ++u) {
        src_x[u] = src_index(u, mask.width, new_width);
    }
    for (int v = 0; v < new_height; ++v) {
        const int sy = src_index(v, mask.height, new_height);
        for (int u = 0; u < new_width; ++u) {
            out.set(u, v, mask.at(src_x[u], sy));
        }
    }
    return out;
}

}  // namespace binmorph
