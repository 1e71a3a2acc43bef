#pragma once

// Run-length union-find labeling over packed rows. Shared by label_components,
// clean and fill.

#include <cstdint>
#include <vector>

#include "binmorph/volume.hpp"

namespace binmorph::detail {

struct Run {
    std::uint32_t row;  // y + ny * z
    std::int32_t x0;    // first voxel
    std::int32_t x1;    // one past the last voxel
};

struct RunLabeling {
    std::vector<Run> runs;                 // in linear scan order
    std::vector<std::uint32_t> run_label;  // 1..K per run
    std::vector<std::size_t> sizes;        // sizes[k - 1] for label k
};

/// Extracts the foreground runs of `v` and groups them into components.
RunLabeling label_runs(const BinaryVolume& v, Connectivity connectivity);

/// Sets voxels [x0, x1) of a packed row.
void set_span(std::span<BinaryVolume::Word> row, int x0, int x1);

}  // namespace binmorph::detail
