#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

#include "binmorph/morphology.hpp"
#include "runs.hpp"

namespace binmorph::detail {

namespace {

using Word = BinaryVolume::Word;
constexpr int kBits = BinaryVolume::kWordBits;

int next_set(std::span<const Word> row, int from, int nx) {
    if (from >= nx) return nx;
    std::size_t k = static_cast<std::size_t>(from / kBits);
    Word w = row[k] & (~Word{0} << (from % kBits));
    while (w == 0) {
        if (++k == row.size()) return nx;
        w = row[k];
    }
    return static_cast<int>(k) * kBits + std::countr_zero(w);
}

// Pad bits are zero, so their complement reads as set; clamp to nx.
int next_clear(std::span<const Word> row, int from, int nx) {
    if (from >= nx) return nx;
    std::size_t k = static_cast<std::size_t>(from / kBits);
    Word w = ~row[k] & (~Word{0} << (from % kBits));
    while (w == 0) {
        if (++k == row.size()) return nx;
        w = ~row[k];
    }
    return std::min(nx, static_cast<int>(k) * kBits + std::countr_zero(w));
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0U); }

    std::uint32_t find(std::uint32_t a) {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }
    // The smaller index becomes the root.
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) {
            parent_[b] = a;
        } else {
            parent_[a] = b;
        }
    }

private:
    std::vector<std::uint32_t> parent_;
};

}  // namespace

void set_span(std::span<Word> row, int x0, int x1) {
    while (x0 < x1) {
        const int k = x0 / kBits;
        const int lo = x0 % kBits;
        const int hi = std::min(x1 - k * kBits, kBits);
        const Word upper = hi == kBits ? ~Word{0} : (Word{1} << hi) - 1;
        row[k] |= upper & (~Word{0} << lo);
        x0 = k * kBits + hi;
    }
}

RunLabeling label_runs(const BinaryVolume& v, Connectivity connectivity) {
    const int nx = v.nx();
    const int ny = v.ny();
    const int nz = v.nz();
    const std::size_t rows = v.row_count();

    RunLabeling out;
    std::vector<std::size_t> row_begin(rows + 1, 0);
    for (std::size_t r = 0; r < rows; ++r) {
        row_begin[r] = out.runs.size();
        auto words = v.row(r);
        int x = next_set(words, 0, nx);
        while (x < nx) {
            const int end = next_clear(words, x, nx);
            out.runs.push_back({static_cast<std::uint32_t>(r), x, end});
            x = next_set(words, end, nx);
        }
    }
    row_begin[rows] = out.runs.size();

    DisjointSets sets(out.runs.size());
    // 26-connectivity joins runs that touch diagonally, i.e. overlap after
    // widening by one voxel.
    const int slack = connectivity == Connectivity::twentysix ? 1 : 0;
    const auto link_rows = [&](std::size_t ra, std::size_t rb) {
        std::size_t i = row_begin[ra];
        std::size_t j = row_begin[rb];
        const std::size_t ie = row_begin[ra + 1];
        const std::size_t je = row_begin[rb + 1];
        while (i < ie && j < je) {
            const Run& a = out.runs[i];
            const Run& b = out.runs[j];
            if (b.x0 < a.x1 + slack && a.x0 < b.x1 + slack) {
                sets.unite(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
            }
            if (a.x1 < b.x1) {
                ++i;
            } else {
                ++j;
            }
        }
    };

    for (int z = 0; z < nz; ++z) {
        for (int y = 0; y < ny; ++y) {
            const std::size_t r = static_cast<std::size_t>(y) + static_cast<std::size_t>(ny) * z;
            if (row_begin[r] == row_begin[r + 1]) continue;
            if (y > 0) link_rows(r, r - 1);
            if (z > 0) {
                const std::size_t below = r - static_cast<std::size_t>(ny);
                link_rows(r, below);
                if (connectivity == Connectivity::twentysix) {
                    if (y > 0) link_rows(r, below - 1);
                    if (y + 1 < ny) link_rows(r, below + 1);
                }
            }
        }
    }

    // Roots are the lowest run index of each set, so labeling roots in run
    // order numbers components by first voxel in scan order.
    out.run_label.assign(out.runs.size(), 0);
    for (std::size_t i = 0; i < out.runs.size(); ++i) {
        const std::uint32_t root = sets.find(static_cast<std::uint32_t>(i));
        if (root == i) {
            out.sizes.push_back(0);
            out.run_label[i] = static_cast<std::uint32_t>(out.sizes.size());
        } else {
            out.run_label[i] = out.run_label[root];
        }
        out.sizes[out.run_label[i] - 1] += static_cast<std::size_t>(out.runs[i].x1 - out.runs[i].x0);
    }
    return out;
}

}  // namespace binmorph::detail

namespace binmorph {

ComponentLabeling label_components(const BinaryVolume& v, Connectivity connectivity) {
    const detail::RunLabeling runs = detail::label_runs(v, connectivity);
    ComponentLabeling out;
    out.dims = v.dims();
    out.connectivity = connectivity;
    out.labels.assign(v.voxel_count(), 0);
    out.component_sizes = runs.sizes;
    for (std::size_t i = 0; i < runs.runs.size(); ++i) {
        const detail::Run& run = runs.runs[i];
        const std::size_t base = static_cast<std::size_t>(run.row) * v.nx();
        std::fill(out.labels.begin() + static_cast<std::ptrdiff_t>(base + run.x0),
                  out.labels.begin() + static_cast<std::ptrdiff_t>(base + run.x1), runs.run_label[i]);
    }
    return out;
}

BinaryVolume clean(const BinaryVolume& v, int keep_count, std::size_t min_voxels, Connectivity connectivity) {
    if (keep_count < 1) {
        throw std::invalid_argument("clean: keep_count must be positive");
    }
    const detail::RunLabeling runs = detail::label_runs(v, connectivity);

    std::vector<std::uint32_t> order(runs.sizes.size());
    std::iota(order.begin(), order.end(), 1U);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return runs.sizes[a - 1] > runs.sizes[b - 1];
    });

    std::vector<bool> keep(runs.sizes.size() + 1, false);
    int kept = 0;
    for (std::uint32_t label : order) {
        if (kept == keep_count || runs.sizes[label - 1] < min_voxels) break;
        keep[label] = true;
        ++kept;
    }

    BinaryVolume out = BinaryVolume::zeros_like(v);
    for (std::size_t i = 0; i < runs.runs.size(); ++i) {
        if (keep[runs.run_label[i]]) {
            const detail::Run& run = runs.runs[i];
            detail::set_span(out.row(run.row), run.x0, run.x1);
        }
    }
    return out;
}

BinaryVolume fill(const BinaryVolume& v, Connectivity background_connectivity) {
    const BinaryVolume background = complement(v);
    const detail::RunLabeling runs = detail::label_runs(background, background_connectivity);

    std::vector<bool> reaches_border(runs.sizes.size() + 1, false);
    const auto ny = static_cast<std::uint32_t>(v.ny());
    const auto nz = static_cast<std::uint32_t>(v.nz());
    for (std::size_t i = 0; i < runs.runs.size(); ++i) {
        const detail::Run& run = runs.runs[i];
        const std::uint32_t y = run.row % ny;
        const std::uint32_t z = run.row / ny;
        if (run.x0 == 0 || run.x1 == v.nx() || y == 0 || y + 1 == ny || z == 0 || z + 1 == nz) {
            reaches_border[runs.run_label[i]] = true;
        }
    }

    BinaryVolume out = v;
    for (std::size_t i = 0; i < runs.runs.size(); ++i) {
        if (!reaches_border[runs.run_label[i]]) {
            const detail::Run& run = runs.runs[i];
            detail::set_span(out.row(run.row), run.x0, run.x1);
        }
    }
    return out;
}

}  // namespace binmorph
