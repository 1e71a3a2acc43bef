#include "binmorph/morphology.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace binmorph {

namespace {

using Word = BinaryVolume::Word;
constexpr int kBits = BinaryVolume::kWordBits;

int floor_div(int a, int b) {
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Word k of `src` moved toward higher x by `shift` bits (negative moves
// toward lower x). Bits entering from outside the row are zero.
inline Word shifted_word(std::span<const Word> src, int k, int shift) {
    const int n = static_cast<int>(src.size());
    const int q = floor_div(shift, kBits);
    const int r = shift - q * kBits;
    const int i = k - q;
    Word w = (i >= 0 && i < n) ? src[i] << r : 0;
    if (r != 0 && i - 1 >= 0 && i - 1 < n) {
        w |= src[i - 1] >> (kBits - r);
    }
    return w;
}

// Adds a bit-plane of weight 2^plane into a 5-plane bit-sliced counter.
inline void accumulate(std::array<Word, 5>& counter, Word bits, int plane) {
    for (int p = plane; p < 5 && bits != 0; ++p) {
        const Word carry = counter[p] & bits;
        counter[p] ^= bits;
        bits = carry;
    }
}

// Lanes whose counter value is >= threshold.
inline Word at_least(const std::array<Word, 5>& counter, int threshold) {
    Word greater = 0;
    Word equal = ~Word{0};
    for (int p = 4; p >= 0; --p) {
        if ((threshold >> p) & 1) {
            equal &= counter[p];
        } else {
            greater |= equal & counter[p];
            equal &= ~counter[p];
        }
    }
    return greater | equal;
}

}  // namespace

BinaryVolume dilate(const BinaryVolume& v, const StructuringElement& se) {
    BinaryVolume out = BinaryVolume::zeros_like(v);
    const int wpr = v.words_per_row();
    for (int z = 0; z < v.nz(); ++z) {
        for (int y = 0; y < v.ny(); ++y) {
            auto dst = out.row(y, z);
            for (const Offset& o : se.offsets()) {
                const int sy = y - o.dy;
                const int sz = z - o.dz;
                if (sy < 0 || sy >= v.ny() || sz < 0 || sz >= v.nz()) continue;
                auto src = v.row(sy, sz);
                if (o.dx == 0) {
                    for (int k = 0; k < wpr; ++k) dst[k] |= src[k];
                } else {
                    for (int k = 0; k < wpr; ++k) dst[k] |= shifted_word(src, k, o.dx);
                }
            }
            dst.back() &= v.tail_mask();
        }
    }
    return out;
}

BinaryVolume erode(const BinaryVolume& v, const StructuringElement& se) {
    BinaryVolume out = BinaryVolume::zeros_like(v);
    const int wpr = v.words_per_row();
    for (int z = 0; z < v.nz(); ++z) {
        for (int y = 0; y < v.ny(); ++y) {
            auto dst = out.row(y, z);
            bool alive = true;
            for (const Offset& o : se.offsets()) {
                const int sy = y + o.dy;
                const int sz = z + o.dz;
                if (sy < 0 || sy >= v.ny() || sz < 0 || sz >= v.nz()) {
                    alive = false;
                    break;
                }
            }
            if (!alive) continue;
            for (int k = 0; k < wpr; ++k) dst[k] = ~Word{0};
            dst.back() = v.tail_mask();
            for (const Offset& o : se.offsets()) {
                auto src = v.row(y + o.dy, z + o.dz);
                if (o.dx == 0) {
                    for (int k = 0; k < wpr; ++k) dst[k] &= src[k];
                } else {
                    for (int k = 0; k < wpr; ++k) dst[k] &= shifted_word(src, k, -o.dx);
                }
            }
        }
    }
    return out;
}

BinaryVolume closing(const BinaryVolume& v, const StructuringElement& se) {
    return erode(dilate(v, se), se.reflect());
}

BinaryVolume opening(const BinaryVolume& v, const StructuringElement& se) {
    return dilate(erode(v, se), se.reflect());
}

BinaryVolume majority(const BinaryVolume& v, int threshold) {
    if (threshold < 1 || threshold > 27) {
        throw std::invalid_argument("majority: threshold must lie in [1, 27], got " + std::to_string(threshold));
    }
    BinaryVolume out = BinaryVolume::zeros_like(v);
    const int wpr = v.words_per_row();
    std::array<std::span<const Word>, 9> neighbors;
    for (int z = 0; z < v.nz(); ++z) {
        for (int y = 0; y < v.ny(); ++y) {
            int n = 0;
            for (int dz = -1; dz <= 1; ++dz) {
                for (int dy = -1; dy <= 1; ++dy) {
                    const int sy = y + dy;
                    const int sz = z + dz;
                    if (sy >= 0 && sy < v.ny() && sz >= 0 && sz < v.nz()) {
                        neighbors[n++] = v.row(sy, sz);
                    }
                }
            }
            if (n * 3 < threshold) continue;
            auto dst = out.row(y, z);
            for (int k = 0; k < wpr; ++k) {
                std::array<Word, 5> counter{};
                for (int i = 0; i < n; ++i) {
                    const Word left = shifted_word(neighbors[i], k, 1);
                    const Word mid = neighbors[i][k];
                    const Word right = shifted_word(neighbors[i], k, -1);
                    // Full adder: per-lane horizontal count in [0, 3].
                    const Word sum = left ^ mid ^ right;
                    const Word carry = (left & mid) | (left & right) | (mid & right);
                    accumulate(counter, sum, 0);
                    accumulate(counter, carry, 1);
                }
                dst[k] = at_least(counter, threshold);
            }
            dst.back() &= v.tail_mask();
        }
    }
    return out;
}

BinaryVolume majority_remove_only(const BinaryVolume& v, int threshold) {
    return intersect(majority(v, threshold), v);
}

}  // namespace binmorph
