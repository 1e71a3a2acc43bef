#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>

#include "binmorph/rng.hpp"
#include "binmorph/volume.hpp"

namespace binmorph::testing {

inline BinaryVolume random_volume(Rng& rng, Dims dims, double density) {
    BinaryVolume v(dims);
    for (int z = 0; z < dims.nz; ++z) {
        for (int y = 0; y < dims.ny; ++y) {
            for (int x = 0; x < dims.nx; ++x) {
                if (rng.chance(density)) v.set(x, y, z, true);
            }
        }
    }
    return v;
}

/// Random volume whose foreground keeps `margin` background voxels from
/// every face.
inline BinaryVolume random_interior_volume(Rng& rng, Dims dims, double density, int margin) {
    BinaryVolume v(dims);
    for (int z = margin; z < dims.nz - margin; ++z) {
        for (int y = margin; y < dims.ny - margin; ++y) {
            for (int x = margin; x < dims.nx - margin; ++x) {
                if (rng.chance(density)) v.set(x, y, z, true);
            }
        }
    }
    return v;
}

inline Dims random_dims(Rng& rng, int lo, int hi) {
    return Dims{rng.between(lo, hi), rng.between(lo, hi), rng.between(lo, hi)};
}

struct Voxel {
    int x, y, z;
};

inline BinaryVolume volume_with(Dims dims, std::initializer_list<Voxel> voxels) {
    BinaryVolume v(dims);
    for (const Voxel& p : voxels) v.set(p.x, p.y, p.z, true);
    return v;
}

inline void set_box(BinaryVolume& v, Voxel lo, Voxel hi_inclusive) {
    for (int z = lo.z; z <= hi_inclusive.z; ++z)
        for (int y = lo.y; y <= hi_inclusive.y; ++y)
            for (int x = lo.x; x <= hi_inclusive.x; ++x) v.set(x, y, z, true);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("binmorph_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace binmorph::testing
