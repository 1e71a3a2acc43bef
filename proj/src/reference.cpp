#include "binmorph/reference.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace binmorph::reference {

namespace {

std::vector<Offset> neighborhood(Connectivity c) {
    std::vector<Offset> out;
    for (int dz = -1; dz <= 1; ++dz) {
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int manhattan = std::abs(dx) + std::abs(dy) + std::abs(dz);
                if (manhattan == 0) continue;
                if (c == Connectivity::six && manhattan != 1) continue;
                out.push_back({dx, dy, dz});
            }
        }
    }
    return out;
}

struct Voxel {
    int x, y, z;
};

std::size_t linear(const Dims& d, int x, int y, int z) {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(d.nx) * (static_cast<std::size_t>(y) + static_cast<std::size_t>(d.ny) * z);
}

}  // namespace

BinaryVolume dilate(const BinaryVolume& v, const StructuringElement& se) {
    BinaryVolume out = BinaryVolume::zeros_like(v);
    for (int z = 0; z < v.nz(); ++z) {
        for (int y = 0; y < v.ny(); ++y) {
            for (int x = 0; x < v.nx(); ++x) {
                for (const Offset& o : se.offsets()) {
                    if (v.get_or_zero(x - o.dx, y - o.dy, z - o.dz)) {
                        out.set(x, y, z, true);
                        break;
                    }
                }
            }
        }
    }
    return out;
}

BinaryVolume erode(const BinaryVolume& v, const StructuringElement& se) {
    BinaryVolume out = BinaryVolume::zeros_like(v);
    for (int z = 0; z < v.nz(); ++z) {
        for (int y = 0; y < v.ny(); ++y) {
            for (int x = 0; x < v.nx(); ++x) {
                bool all = true;
                for (const Offset& o : se.offsets()) {
                    if (!v.get_or_zero(x + o.dx, y + o.dy, z + o.dz)) {
                        all = false;
                        break;
                    }
                }
                out.set(x, y, z, all);
            }
        }
    }
    return out;
}

BinaryVolume majority(const BinaryVolume& v, int threshold) {
    if (threshold < 1 || threshold > 27) {
        throw std::invalid_argument("majority: threshold must lie in [1, 27], got " + std::to_string(threshold));
    }
    BinaryVolume out = BinaryVolume::zeros_like(v);
    for (int z = 0; z < v.nz(); ++z) {
        for (int y = 0; y < v.ny(); ++y) {
            for (int x = 0; x < v.nx(); ++x) {
                int count = 0;
                for (int dz = -1; dz <= 1; ++dz) {
                    for (int dy = -1; dy <= 1; ++dy) {
                        for (int dx = -1; dx <= 1; ++dx) {
                            count += v.get_or_zero(x + dx, y + dy, z + dz) ? 1 : 0;
                        }
                    }
                }
                out.set(x, y, z, count >= threshold);
            }
        }
    }
    return out;
}

BinaryVolume fill(const BinaryVolume& v, Connectivity background_connectivity) {
    const Dims d = v.dims();
    const auto steps = neighborhood(background_connectivity);
    std::vector<char> outside(d.voxel_count(), 0);
    std::vector<Voxel> stack;
    for (int z = 0; z < d.nz; ++z) {
        for (int y = 0; y < d.ny; ++y) {
            for (int x = 0; x < d.nx; ++x) {
                const bool border = x == 0 || y == 0 || z == 0 || x == d.nx - 1 || y == d.ny - 1 || z == d.nz - 1;
                if (border && !v.get(x, y, z) && !outside[linear(d, x, y, z)]) {
                    outside[linear(d, x, y, z)] = 1;
                    stack.push_back({x, y, z});
                }
            }
        }
    }
    while (!stack.empty()) {
        const Voxel p = stack.back();
        stack.pop_back();
        for (const Offset& s : steps) {
            const int x = p.x + s.dx;
            const int y = p.y + s.dy;
            const int z = p.z + s.dz;
            if (!d.contains(x, y, z) || v.get(x, y, z) || outside[linear(d, x, y, z)]) continue;
            outside[linear(d, x, y, z)] = 1;
            stack.push_back({x, y, z});
        }
    }
    BinaryVolume out = v;
    for (int z = 0; z < d.nz; ++z) {
        for (int y = 0; y < d.ny; ++y) {
            for (int x = 0; x < d.nx; ++x) {
                if (!v.get(x, y, z) && !outside[linear(d, x, y, z)]) out.set(x, y, z, true);
            }
        }
    }
    return out;
}

ComponentLabeling label_components(const BinaryVolume& v, Connectivity connectivity) {
    const Dims d = v.dims();
    const auto steps = neighborhood(connectivity);
    ComponentLabeling out;
    out.dims = d;
    out.connectivity = connectivity;
    out.labels.assign(d.voxel_count(), 0);
    std::vector<Voxel> stack;
    for (int z = 0; z < d.nz; ++z) {
        for (int y = 0; y < d.ny; ++y) {
            for (int x = 0; x < d.nx; ++x) {
                if (!v.get(x, y, z) || out.labels[linear(d, x, y, z)] != 0) continue;
                const auto label = static_cast<std::uint32_t>(out.component_sizes.size() + 1);
                std::size_t size = 1;
                out.labels[linear(d, x, y, z)] = label;
                stack.push_back({x, y, z});
                while (!stack.empty()) {
                    const Voxel p = stack.back();
                    stack.pop_back();
                    for (const Offset& s : steps) {
                        const int qx = p.x + s.dx;
                        const int qy = p.y + s.dy;
                        const int qz = p.z + s.dz;
                        if (!v.get_or_zero(qx, qy, qz) || out.labels[linear(d, qx, qy, qz)] != 0) continue;
                        out.labels[linear(d, qx, qy, qz)] = label;
                        ++size;
                        stack.push_back({qx, qy, qz});
                    }
                }
                out.component_sizes.push_back(size);
            }
        }
    }
    return out;
}

BinaryVolume clean(const BinaryVolume& v, int keep_count, std::size_t min_voxels, Connectivity connectivity) {
    if (keep_count < 1) {
        throw std::invalid_argument("clean: keep_count must be positive");
    }
    const ComponentLabeling lab = reference::label_components(v, connectivity);
    std::vector<std::uint32_t> order(lab.component_count());
    std::iota(order.begin(), order.end(), 1U);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (lab.size_of(a) != lab.size_of(b)) return lab.size_of(a) > lab.size_of(b);
        return a < b;
    });
    std::vector<bool> keep(lab.component_count() + 1, false);
    for (std::size_t i = 0; i < order.size() && i < static_cast<std::size_t>(keep_count); ++i) {
        if (lab.size_of(order[i]) >= min_voxels) keep[order[i]] = true;
    }
    BinaryVolume out = BinaryVolume::zeros_like(v);
    for (int z = 0; z < v.nz(); ++z) {
        for (int y = 0; y < v.ny(); ++y) {
            for (int x = 0; x < v.nx(); ++x) {
                if (keep[lab.at(x, y, z)] && lab.at(x, y, z) != 0) out.set(x, y, z, true);
            }
        }
    }
    return out;
}

}  // namespace binmorph::reference
