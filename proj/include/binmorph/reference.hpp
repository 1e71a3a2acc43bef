#pragma once

// Naive per-voxel implementations of the morphology kernels. They share the
// contracts in morphology.hpp and exist to cross-check the packed kernels.

#include "binmorph/morphology.hpp"

namespace binmorph::reference {

BinaryVolume dilate(const BinaryVolume& v, const StructuringElement& se);
BinaryVolume erode(const BinaryVolume& v, const StructuringElement& se);
BinaryVolume majority(const BinaryVolume& v, int threshold = kDefaultMajorityThreshold);
BinaryVolume fill(const BinaryVolume& v, Connectivity background_connectivity = Connectivity::six);
ComponentLabeling label_components(const BinaryVolume& v, Connectivity connectivity);
BinaryVolume clean(const BinaryVolume& v, int keep_count, std::size_t min_voxels,
                   Connectivity connectivity = Connectivity::twentysix);

}  // namespace binmorph::reference
