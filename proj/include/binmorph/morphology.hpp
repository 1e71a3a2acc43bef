#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "binmorph/structuring_element.hpp"
#include "binmorph/volume.hpp"

namespace binmorph {

/// Result of connected-component labeling. Labels run 1..K in order of each
/// component's first voxel in linear scan order; 0 is background.
struct ComponentLabeling {
    Dims dims;
    Connectivity connectivity = Connectivity::twentysix;
    std::vector<std::uint32_t> labels;        // one per voxel, linear index
    std::vector<std::size_t> component_sizes; // component_sizes[k - 1] is the size of label k

    std::size_t component_count() const { return component_sizes.size(); }
    std::size_t size_of(std::uint32_t label) const { return component_sizes.at(label - 1); }
    std::uint32_t at(int x, int y, int z) const {
        return labels[static_cast<std::size_t>(x) +
                      static_cast<std::size_t>(dims.nx) * (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims.ny) * z)];
    }

    friend bool operator==(const ComponentLabeling&, const ComponentLabeling&) = default;
};

/// Voxel p is set iff some offset o has p - o inside the grid and set.
BinaryVolume dilate(const BinaryVolume& v, const StructuringElement& se);

/// Voxel p is set iff every p + o is inside the grid and set.
BinaryVolume erode(const BinaryVolume& v, const StructuringElement& se);

BinaryVolume closing(const BinaryVolume& v, const StructuringElement& se);
BinaryVolume opening(const BinaryVolume& v, const StructuringElement& se);

ComponentLabeling label_components(const BinaryVolume& v, Connectivity connectivity);

/// Keeps at most `keep_count` largest components, discarding any with fewer
/// than `min_voxels` voxels. Equal sizes rank by first voxel in scan order.
BinaryVolume clean(const BinaryVolume& v, int keep_count, std::size_t min_voxels,
                   Connectivity connectivity = Connectivity::twentysix);

inline constexpr int kDefaultMajorityThreshold = 14;

/// Voxel p is set iff at least `threshold` voxels of its 3x3x3 neighborhood
/// (p included, outside counting as background) are set. Both adds and
/// removes voxels. threshold must lie in [1, 27].
BinaryVolume majority(const BinaryVolume& v, int threshold = kDefaultMajorityThreshold);

/// Removal-only majority: majority(v, threshold) restricted to v.
BinaryVolume majority_remove_only(const BinaryVolume& v, int threshold = kDefaultMajorityThreshold);

/// Sets every background voxel that cannot reach the grid border through
/// background under `background_connectivity`.
BinaryVolume fill(const BinaryVolume& v, Connectivity background_connectivity = Connectivity::six);

}  // namespace binmorph
