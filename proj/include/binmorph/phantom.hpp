#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "binmorph/volume.hpp"

namespace binmorph {

/// Ellipsoid in voxel coordinates. The rotation (radians) is applied as
/// Rz * Ry * Rx to the axis-aligned shape before translating to `center`.
struct Ellipsoid {
    std::array<double, 3> center{};
    std::array<double, 3> semi_axes{1.0, 1.0, 1.0};
    std::array<double, 3> rotation{};  // about x, y, z

    bool contains(double x, double y, double z) const;
    /// Half-width of the axis-aligned bounding box along each world axis.
    std::array<double, 3> half_extent() const;
};

struct PhantomSpec {
    static constexpr int kMinSlices = 11;
    static constexpr int kMaxSlices = 56;
    static constexpr double kMargin = 3.0;

    Dims dims{128, 128, 32};
    Spacing spacing_mm{3.0, 3.0, 6.0};
    std::array<Ellipsoid, 2> kidneys{};
    std::uint64_t seed = 0;

    /// Kidney-like pair on an in_plane x in_plane grid with 11..56 slices,
    /// drawn deterministically from `seed`.
    static PhantomSpec sample(std::uint64_t seed, int in_plane = 128);
};

/// Throws std::invalid_argument when an ellipsoid leaves the 3-voxel margin,
/// is empty on the lattice, or the two kidneys touch (26-adjacent or
/// overlapping voxels).
void validate(const PhantomSpec& spec);

BinaryVolume rasterize(const Ellipsoid& e, Dims dims, Spacing spacing_mm = {1.0, 1.0, 1.0});

/// Voxel set iff its center lies inside either ellipsoid.
BinaryVolume generate_ground_truth(const PhantomSpec& spec);

struct PerturbationSpec {
    int speckle_count = 0;
    int speckle_max_size = 0;  // voxels per speckle blob
    int hole_count = 0;
    int hole_max_radius = 0;
    double boundary_flip_probability = 0.0;
    int dropped_slices = 0;
    std::uint64_t seed = 0;
};

void validate(const PerturbationSpec& spec);

struct Perturbation {
    BinaryVolume volume;
    BinaryVolume flipped;  // voxels toggled in the surface band
    BinaryVolume holes;    // voxels cleared by hole carving
    BinaryVolume speckle;  // voxels added as speckle
    std::vector<int> dropped_slices;
};

/// Applies, in order: surface-band flips, hole carving, speckle, slice drops.
///
/// Holes are balls buried under at least two voxels of ground truth in every
/// direction, so each is an enclosed cavity. Speckles are 6-connected blobs
/// with no other foreground within Chebyshev distance 3. Placement uses
/// rejection sampling; an element that cannot be placed is skipped.
Perturbation perturb_detailed(const BinaryVolume& gt, const PerturbationSpec& spec);
BinaryVolume perturb(const BinaryVolume& gt, const PerturbationSpec& spec);

}  // namespace binmorph
