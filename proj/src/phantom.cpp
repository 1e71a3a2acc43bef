#include "binmorph/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "binmorph/morphology.hpp"
#include "binmorph/rng.hpp"

namespace binmorph {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 rotation_matrix(const std::array<double, 3>& angles) {
    const double cx = std::cos(angles[0]), sx = std::sin(angles[0]);
    const double cy = std::cos(angles[1]), sy = std::sin(angles[1]);
    const double cz = std::cos(angles[2]), sz = std::sin(angles[2]);
    // Rz * Ry * Rx
    return {{{cz * cy, cz * sy * sx - sz * cx, cz * sy * cx + sz * sx},
             {sz * cy, sz * sy * sx + cz * cx, sz * sy * cx - cz * sx},
             {-sy, cy * sx, cy * cx}}};
}

struct Voxel {
    int x, y, z;
    friend bool operator==(const Voxel&, const Voxel&) = default;
};

constexpr std::array<Voxel, 6> kFaceSteps{{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};

std::vector<Voxel> ball_offsets(int radius) {
    std::vector<Voxel> out;
    for (int dz = -radius; dz <= radius; ++dz) {
        for (int dy = -radius; dy <= radius; ++dy) {
            for (int dx = -radius; dx <= radius; ++dx) {
                if (dx * dx + dy * dy + dz * dz <= radius * radius) out.push_back({dx, dy, dz});
            }
        }
    }
    return out;
}

bool is_set(const BinaryVolume& v, const Voxel& p) {
    return v.get_or_zero(p.x, p.y, p.z);
}

Voxel voxel_at(const BinaryVolume& v, std::size_t linear) {
    const auto nx = static_cast<std::size_t>(v.nx());
    const auto ny = static_cast<std::size_t>(v.ny());
    return {static_cast<int>(linear % nx), static_cast<int>((linear / nx) % ny), static_cast<int>(linear / (nx * ny))};
}

std::vector<std::size_t> foreground_indices(const BinaryVolume& v) {
    std::vector<std::size_t> out;
    std::size_t i = 0;
    for (int z = 0; z < v.nz(); ++z) {
        for (int y = 0; y < v.ny(); ++y) {
            for (int x = 0; x < v.nx(); ++x, ++i) {
                if (v.get(x, y, z)) out.push_back(i);
            }
        }
    }
    return out;
}

void flip_surface_band(const BinaryVolume& gt, double probability, Rng& rng, Perturbation& out) {
    if (probability <= 0.0) return;
    const BinaryVolume band =
        difference(dilate(gt, StructuringElement::cross6()), erode(gt, StructuringElement::cross6()));
    for (int z = 0; z < gt.nz(); ++z) {
        for (int y = 0; y < gt.ny(); ++y) {
            for (int x = 0; x < gt.nx(); ++x) {
                if (!band.get(x, y, z) || !rng.chance(probability)) continue;
                out.volume.set(x, y, z, !out.volume.get(x, y, z));
                out.flipped.set(x, y, z, true);
            }
        }
    }
}

constexpr int kPlacementTries = 500;
constexpr int kHoleWall = 2;
// Background layers between a speckle blob and any other foreground. Three
// keeps blobs 26-separated from kidneys even after a cross6 dilation.
constexpr int kSpeckleClearance = 3;

void carve_holes(const BinaryVolume& gt, const PerturbationSpec& spec, Rng& rng, Perturbation& out) {
    if (spec.hole_count <= 0) return;
    // Ball voxels must keep a wall of at least kHoleWall voxels (Chebyshev)
    // to the background, so the cavity stays sealed under majority voting.
    BinaryVolume core = gt;
    for (int i = 0; i < kHoleWall; ++i) core = erode(core, StructuringElement::cube27());
    const std::vector<std::size_t> centers = foreground_indices(core);
    if (centers.empty()) return;
    // Hole voxels plus their face shell, to keep holes from merging.
    BinaryVolume reserved = BinaryVolume::zeros_like(gt);
    for (int h = 0; h < spec.hole_count; ++h) {
        const int radius = rng.between(std::min(1, spec.hole_max_radius), spec.hole_max_radius);
        const std::vector<Voxel> ball = ball_offsets(radius);
        for (int attempt = 0; attempt < kPlacementTries; ++attempt) {
            const Voxel c = voxel_at(gt, centers[rng.below(centers.size())]);
            bool ok = true;
            for (const Voxel& b : ball) {
                const Voxel p{c.x + b.x, c.y + b.y, c.z + b.z};
                if (!is_set(core, p) || is_set(reserved, p)) ok = false;
                for (const Voxel& s : kFaceSteps) {
                    if (is_set(reserved, {p.x + s.x, p.y + s.y, p.z + s.z})) ok = false;
                }
                if (!ok) break;
            }
            if (!ok) continue;
            for (const Voxel& b : ball) {
                const Voxel p{c.x + b.x, c.y + b.y, c.z + b.z};
                out.volume.set(p.x, p.y, p.z, false);
                out.holes.set(p.x, p.y, p.z, true);
                reserved.set(p.x, p.y, p.z, true);
                for (const Voxel& s : kFaceSteps) reserved.set(p.x + s.x, p.y + s.y, p.z + s.z, true);
            }
            break;
        }
    }
}

void add_speckle(const PerturbationSpec& spec, Rng& rng, Perturbation& out) {
    BinaryVolume& v = out.volume;
    for (int s = 0; s < spec.speckle_count; ++s) {
        const int size = rng.between(1, spec.speckle_max_size);
        for (int attempt = 0; attempt < kPlacementTries; ++attempt) {
            const Voxel seed{rng.between(0, v.nx() - 1), rng.between(0, v.ny() - 1), rng.between(0, v.nz() - 1)};
            std::vector<Voxel> blob{seed};
            for (int grow = 0; static_cast<int>(blob.size()) < size && grow < 64 * size; ++grow) {
                const Voxel& from = blob[rng.below(blob.size())];
                const Voxel& step = kFaceSteps[rng.below(kFaceSteps.size())];
                const Voxel p{from.x + step.x, from.y + step.y, from.z + step.z};
                if (!v.dims().contains(p.x, p.y, p.z)) continue;
                if (std::find(blob.begin(), blob.end(), p) != blob.end()) continue;
                blob.push_back(p);
            }
            if (static_cast<int>(blob.size()) != size) continue;

            bool clear = true;
            for (const Voxel& p : blob) {
                for (int dz = -kSpeckleClearance; dz <= kSpeckleClearance && clear; ++dz) {
                    for (int dy = -kSpeckleClearance; dy <= kSpeckleClearance && clear; ++dy) {
                        for (int dx = -kSpeckleClearance; dx <= kSpeckleClearance && clear; ++dx) {
                            if (v.get_or_zero(p.x + dx, p.y + dy, p.z + dz)) clear = false;
                        }
                    }
                }
                if (!clear) break;
            }
            if (!clear) continue;
            for (const Voxel& p : blob) {
                v.set(p.x, p.y, p.z, true);
                out.speckle.set(p.x, p.y, p.z, true);
            }
            break;
        }
    }
}

void drop_slices(const BinaryVolume& gt, int count, Rng& rng, Perturbation& out) {
    if (count <= 0) return;
    std::vector<int> candidates;
    for (int z = 0; z < gt.nz(); ++z) {
        for (int y = 0; y < gt.ny(); ++y) {
            auto row = gt.row(y, z);
            if (std::any_of(row.begin(), row.end(), [](auto w) { return w != 0; })) {
                candidates.push_back(z);
                break;
            }
        }
    }
    rng.shuffle(std::span<int>(candidates));
    candidates.resize(std::min(candidates.size(), static_cast<std::size_t>(count)));
    std::sort(candidates.begin(), candidates.end());
    for (int z : candidates) {
        for (int y = 0; y < gt.ny(); ++y) {
            auto row = out.volume.row(y, z);
            std::fill(row.begin(), row.end(), 0);
        }
    }
    out.dropped_slices = std::move(candidates);
}

}  // namespace

bool Ellipsoid::contains(double x, double y, double z) const {
    const Mat3 r = rotation_matrix(rotation);
    const double d[3] = {x - center[0], y - center[1], z - center[2]};
    // sum (l_j / a_j)^2 <= 1, multiplied through by (a0 a1 a2)^2 so that
    // integer offsets and axes are decided exactly.
    const double a2[3] = {semi_axes[0] * semi_axes[0], semi_axes[1] * semi_axes[1], semi_axes[2] * semi_axes[2]};
    double lhs = 0.0;
    for (int j = 0; j < 3; ++j) {
        // Local coordinate j is column j of R dotted with d.
        const double local = r[0][j] * d[0] + r[1][j] * d[1] + r[2][j] * d[2];
        lhs += local * local * a2[(j + 1) % 3] * a2[(j + 2) % 3];
    }
    return lhs <= a2[0] * a2[1] * a2[2];
}

std::array<double, 3> Ellipsoid::half_extent() const {
    const Mat3 r = rotation_matrix(rotation);
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j) s += (r[i][j] * semi_axes[j]) * (r[i][j] * semi_axes[j]);
        out[i] = std::sqrt(s);
    }
    return out;
}

BinaryVolume rasterize(const Ellipsoid& e, Dims dims, Spacing spacing_mm) {
    BinaryVolume v(dims, spacing_mm);
    const auto ext = e.half_extent();
    const auto lo = [&](int axis) { return std::max(0, static_cast<int>(std::floor(e.center[axis] - ext[axis]))); };
    const auto hi = [&](int axis, int n) {
        return std::min(n - 1, static_cast<int>(std::ceil(e.center[axis] + ext[axis])));
    };
    for (int z = lo(2); z <= hi(2, dims.nz); ++z) {
        for (int y = lo(1); y <= hi(1, dims.ny); ++y) {
            for (int x = lo(0); x <= hi(0, dims.nx); ++x) {
                if (e.contains(x, y, z)) v.set(x, y, z, true);
            }
        }
    }
    return v;
}

void validate(const PhantomSpec& spec) {
    const Dims& d = spec.dims;
    if (d.nx <= 0 || d.ny <= 0 || d.nz <= 0) {
        throw std::invalid_argument("phantom: dimensions must be positive");
    }
    const int n[3] = {d.nx, d.ny, d.nz};
    for (std::size_t k = 0; k < spec.kidneys.size(); ++k) {
        const Ellipsoid& e = spec.kidneys[k];
        const auto ext = e.half_extent();
        for (int axis = 0; axis < 3; ++axis) {
            if (!(e.semi_axes[axis] > 0.0)) {
                throw std::invalid_argument("phantom: kidney " + std::to_string(k) + " has a non-positive semi-axis");
            }
            if (e.center[axis] - ext[axis] < PhantomSpec::kMargin ||
                e.center[axis] + ext[axis] > n[axis] - 1 - PhantomSpec::kMargin) {
                throw std::invalid_argument("phantom: kidney " + std::to_string(k) + " violates the " +
                                            std::to_string(static_cast<int>(PhantomSpec::kMargin)) +
                                            "-voxel margin along axis " + "xyz"[axis]);
            }
        }
    }
    const BinaryVolume a = rasterize(spec.kidneys[0], d);
    const BinaryVolume b = rasterize(spec.kidneys[1], d);
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("phantom: a kidney covers no voxel center");
    }
    if (!intersect(dilate(a, StructuringElement::cube27()), b).empty()) {
        throw std::invalid_argument("phantom: kidneys overlap or touch");
    }
}

PhantomSpec PhantomSpec::sample(std::uint64_t seed, int in_plane) {
    if (in_plane < 32) {
        throw std::invalid_argument("phantom: in-plane size must be at least 32");
    }
    Rng rng(seed);
    PhantomSpec spec;
    spec.seed = seed;
    const int slices = rng.between(kMinSlices, kMaxSlices);
    spec.dims = Dims{in_plane, in_plane, slices};
    spec.spacing_mm = {384.0 / in_plane, 384.0 / in_plane, 6.0};

    const double scale = in_plane / 128.0;
    const double mid_z = (slices - 1) / 2.0;
    const double max_semi_z = std::min(mid_z - kMargin, 12.0);
    for (;;) {
        for (int side = 0; side < 2; ++side) {
            Ellipsoid& e = spec.kidneys[side];
            e.semi_axes = {rng.uniform(8.0, 12.0) * scale, rng.uniform(15.0, 22.0) * scale,
                           rng.uniform(std::max(2.0, 0.6 * max_semi_z), max_semi_z)};
            // Long axes lean outward at the lower pole, as in a coronal view.
            const double tilt = rng.uniform(0.05, 0.3);
            e.rotation = {0.0, 0.0, side == 0 ? -tilt : tilt};
            const double z_slack = mid_z - kMargin - e.semi_axes[2];
            e.center = {in_plane * (side == 0 ? rng.uniform(0.27, 0.33) : rng.uniform(0.67, 0.73)),
                        in_plane * rng.uniform(0.45, 0.55), mid_z + rng.uniform(-z_slack, z_slack)};
        }
        try {
            validate(spec);
            return spec;
        } catch (const std::invalid_argument&) {
            // Draw again; the stream stays deterministic per seed.
        }
    }
}

BinaryVolume generate_ground_truth(const PhantomSpec& spec) {
    validate(spec);
    return unite(rasterize(spec.kidneys[0], spec.dims, spec.spacing_mm),
                 rasterize(spec.kidneys[1], spec.dims, spec.spacing_mm));
}

void validate(const PerturbationSpec& spec) {
    if (spec.speckle_count < 0 || spec.hole_count < 0 || spec.dropped_slices < 0) {
        throw std::invalid_argument("perturbation: counts must be non-negative");
    }
    if (spec.speckle_max_size < 0 || spec.hole_max_radius < 0) {
        throw std::invalid_argument("perturbation: sizes must be non-negative");
    }
    if (spec.speckle_count > 0 && spec.speckle_max_size < 1) {
        throw std::invalid_argument("perturbation: speckle needs a positive max size");
    }
    if (!(spec.boundary_flip_probability >= 0.0 && spec.boundary_flip_probability <= 1.0)) {
        throw std::invalid_argument("perturbation: flip probability must lie in [0, 1]");
    }
}

Perturbation perturb_detailed(const BinaryVolume& gt, const PerturbationSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    Perturbation out{gt, BinaryVolume::zeros_like(gt), BinaryVolume::zeros_like(gt), BinaryVolume::zeros_like(gt), {}};
    flip_surface_band(gt, spec.boundary_flip_probability, rng, out);
    carve_holes(gt, spec, rng, out);
    add_speckle(spec, rng, out);
    drop_slices(gt, spec.dropped_slices, rng, out);
    return out;
}

BinaryVolume perturb(const BinaryVolume& gt, const PerturbationSpec& spec) {
    return perturb_detailed(gt, spec).volume;
}

}  // namespace binmorph
