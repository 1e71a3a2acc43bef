#include <doctest.h>

#include <set>
#include <tuple>

#include "binmorph/morphology.hpp"
#include "binmorph/reference.hpp"
#include "test_support.hpp"

using namespace binmorph;
using namespace binmorph::testing;

namespace {

const StructuringElement kCross = StructuringElement::cross6();
const StructuringElement kCube = StructuringElement::cube27();

// Foreground count of the 3x3x3 neighborhood, written out longhand.
int neighborhood_count(const BinaryVolume& v, int x, int y, int z) {
    int n = 0;
    for (int dz = -1; dz <= 1; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) n += v.get_or_zero(x + dx, y + dy, z + dz) ? 1 : 0;
    return n;
}

std::set<std::tuple<int, int, int>> voxels_of(const BinaryVolume& v) {
    std::set<std::tuple<int, int, int>> out;
    for (int z = 0; z < v.nz(); ++z)
        for (int y = 0; y < v.ny(); ++y)
            for (int x = 0; x < v.nx(); ++x)
                if (v.get(x, y, z)) out.emplace(x, y, z);
    return out;
}

StructuringElement random_element(Rng& rng) {
    std::vector<Offset> offs;
    const int n = rng.between(1, 6);
    while (static_cast<int>(offs.size()) < n) {
        const Offset o{rng.between(-2, 2), rng.between(-2, 2), rng.between(-2, 2)};
        if (std::find(offs.begin(), offs.end(), o) == offs.end()) offs.push_back(o);
    }
    return StructuringElement(offs);
}

}  // namespace

TEST_CASE("structuring elements") {
    CHECK(kCross.size() == 7);
    CHECK(kCube.size() == 27);
    CHECK(kCross.contains_origin());
    CHECK(kCross.contains({0, 0, -1}));
    CHECK_FALSE(kCross.contains({1, 1, 0}));
    CHECK(kCube.reach() == 1);
    CHECK(kCross.reflect() == kCross);
    CHECK(StructuringElement::builtin("cube27") == kCube);
    CHECK_FALSE(StructuringElement::builtin("sphere").has_value());
    CHECK_THROWS_AS(StructuringElement({}), std::invalid_argument);
    CHECK_THROWS_AS(StructuringElement({{0, 0, 0}, {0, 0, 0}}), std::invalid_argument);
    const StructuringElement a({{1, 0, 0}, {0, 2, -1}});
    const StructuringElement b({{0, 2, -1}, {1, 0, 0}});
    CHECK(a == b);
    CHECK(a.reflect() == StructuringElement({{-1, 0, 0}, {0, -2, 1}}));
}

TEST_CASE("dilate examples") {
    SUBCASE("single voxel with cross6") {
        const BinaryVolume v = volume_with(Dims{5, 5, 5}, {{2, 2, 2}});
        const BinaryVolume d = dilate(v, kCross);
        CHECK(d.count() == 7);
        CHECK(d.get(1, 2, 2));
        CHECK(d.get(2, 2, 3));
        CHECK_FALSE(d.get(1, 1, 2));
    }
    SUBCASE("single voxel with cube27") {
        CHECK(dilate(volume_with(Dims{5, 5, 5}, {{2, 2, 2}}), kCube).count() == 27);
    }
    SUBCASE("corner voxel is clipped") {
        CHECK(dilate(volume_with(Dims{3, 3, 3}, {{0, 0, 0}}), kCross).count() == 4);
        CHECK(dilate(volume_with(Dims{3, 3, 3}, {{0, 0, 0}}), kCube).count() == 8);
    }
    SUBCASE("empty stays empty") {
        CHECK(dilate(BinaryVolume(Dims{4, 4, 4}), kCube).count() == 0);
    }
    SUBCASE("point element is the identity") {
        Rng rng(1);
        const BinaryVolume v = random_volume(rng, Dims{9, 7, 5}, 0.3);
        CHECK(dilate(v, StructuringElement::point()) == v);
        CHECK(erode(v, StructuringElement::point()) == v);
    }
    SUBCASE("asymmetric offset shifts the volume") {
        // Dilation by {(+1,0,0)} moves every voxel one step along +x.
        const BinaryVolume v = volume_with(Dims{70, 1, 1}, {{0, 0, 0}, {63, 0, 0}, {69, 0, 0}});
        const BinaryVolume d = dilate(v, StructuringElement({{1, 0, 0}}));
        CHECK(voxels_of(d) == std::set<std::tuple<int, int, int>>{{1, 0, 0}, {64, 0, 0}});
    }
}

TEST_CASE("erode examples") {
    SUBCASE("3x3x3 block under cross6 keeps only the center") {
        BinaryVolume v(Dims{5, 5, 5});
        set_box(v, {1, 1, 1}, {3, 3, 3});
        const BinaryVolume e = erode(v, kCross);
        CHECK(voxels_of(e) == std::set<std::tuple<int, int, int>>{{2, 2, 2}});
    }
    SUBCASE("full grid erodes from the border") {
        const BinaryVolume e = erode(BinaryVolume::filled(Dims{3, 3, 3}, true), kCross);
        CHECK(e.count() == 1);
        CHECK(e.get(1, 1, 1));
    }
    SUBCASE("single voxel vanishes") {
        CHECK(erode(volume_with(Dims{3, 3, 3}, {{1, 1, 1}}), kCross).count() == 0);
    }
}

TEST_CASE("packed dilate and erode agree with the naive kernels") {
    Rng rng(101);
    for (int trial = 0; trial < 60; ++trial) {
        const Dims dims{rng.between(1, 140), rng.between(1, 6), rng.between(1, 6)};
        const BinaryVolume v = random_volume(rng, dims, rng.uniform(0.05, 0.95));
        const StructuringElement se = trial % 3 == 0 ? kCross : trial % 3 == 1 ? kCube : random_element(rng);
        CHECK(dilate(v, se) == reference::dilate(v, se));
        CHECK(erode(v, se) == reference::erode(v, se));
    }
}

TEST_CASE("morphology algebra") {
    Rng rng(202);
    for (int trial = 0; trial < 30; ++trial) {
        const BinaryVolume v = random_volume(rng, random_dims(rng, 1, 14), rng.uniform(0.05, 0.95));
        const BinaryVolume w = unite(v, random_volume(rng, v.dims(), 0.2));
        const StructuringElement se = trial % 2 == 0 ? kCross : kCube;
        CHECK(is_subset(v, dilate(v, se)));
        CHECK(is_subset(erode(v, se), v));
        CHECK(is_subset(dilate(v, se), dilate(w, se)));
        CHECK(is_subset(erode(v, se), erode(w, se)));
        CHECK(is_subset(opening(v, se), v));
        const BinaryVolume inner = random_interior_volume(rng, random_dims(rng, 5, 14), 0.5, 2);
        const BinaryVolume c = closing(inner, se);
        const BinaryVolume o = opening(inner, se);
        CHECK(is_subset(inner, c));
        CHECK(closing(c, se) == c);
        CHECK(opening(o, se) == o);
    }
}

TEST_CASE("closing clears border voxels because outside is background") {
    const BinaryVolume v = BinaryVolume::filled(Dims{3, 3, 3}, true);
    const BinaryVolume c = closing(v, kCross);
    CHECK(c.count() == 1);
    CHECK(c.get(1, 1, 1));
}

TEST_CASE("label_components examples") {
    SUBCASE("diagonal pair") {
        const BinaryVolume v = volume_with(Dims{3, 3, 3}, {{0, 0, 0}, {1, 1, 1}});
        CHECK(label_components(v, Connectivity::twentysix).component_count() == 1);
        CHECK(label_components(v, Connectivity::six).component_count() == 2);
    }
    SUBCASE("face-adjacent pair") {
        const BinaryVolume v = volume_with(Dims{3, 3, 3}, {{0, 0, 0}, {1, 0, 0}});
        CHECK(label_components(v, Connectivity::six).component_count() == 1);
    }
    SUBCASE("empty") {
        const ComponentLabeling lab = label_components(BinaryVolume(Dims{4, 4, 4}), Connectivity::six);
        CHECK(lab.component_count() == 0);
        CHECK(lab.labels.size() == 64);
    }
    SUBCASE("labels follow first-voxel scan order") {
        const BinaryVolume v = volume_with(Dims{4, 4, 1}, {{3, 0, 0}, {0, 2, 0}, {0, 3, 0}, {3, 3, 0}});
        const ComponentLabeling lab = label_components(v, Connectivity::six);
        CHECK(lab.component_count() == 3);
        CHECK(lab.at(3, 0, 0) == 1);
        CHECK(lab.at(0, 2, 0) == 2);
        CHECK(lab.at(0, 3, 0) == 2);
        CHECK(lab.at(3, 3, 0) == 3);
        CHECK(lab.size_of(2) == 2);
    }
    SUBCASE("a U shape merges late") {
        BinaryVolume v(Dims{5, 4, 1});
        set_box(v, {0, 0, 0}, {0, 3, 0});
        set_box(v, {4, 0, 0}, {4, 3, 0});
        set_box(v, {0, 3, 0}, {4, 3, 0});
        const ComponentLabeling lab = label_components(v, Connectivity::six);
        CHECK(lab.component_count() == 1);
        CHECK(lab.at(4, 0, 0) == 1);
    }
}

TEST_CASE("run-based labeling agrees with flood fill") {
    Rng rng(303);
    for (int trial = 0; trial < 60; ++trial) {
        const Dims dims{rng.between(1, 80), rng.between(1, 10), rng.between(1, 10)};
        const BinaryVolume v = random_volume(rng, dims, rng.uniform(0.05, 0.95));
        for (Connectivity c : {Connectivity::six, Connectivity::twentysix}) {
            const ComponentLabeling fast = label_components(v, c);
            CHECK(fast == reference::label_components(v, c));
            std::size_t total = 0;
            for (std::size_t s : fast.component_sizes) total += s;
            CHECK(total == v.count());
        }
    }
}

TEST_CASE("clean examples") {
    BinaryVolume v(Dims{30, 12, 4});
    set_box(v, {0, 0, 0}, {4, 4, 3});      // 100 voxels
    set_box(v, {10, 0, 0}, {13, 4, 3});    // 80 voxels
    set_box(v, {20, 10, 0}, {22, 10, 0});  // 3 voxels
    REQUIRE(label_components(v, Connectivity::twentysix).component_count() == 3);

    const BinaryVolume kept = clean(v, 2, 10);
    CHECK(kept.count() == 180);
    CHECK_FALSE(kept.get(21, 10, 0));

    CHECK(clean(v, 2, 90).count() == 100);
    CHECK(clean(v, 1, 0).count() == 100);
    CHECK(clean(v, 5, 0) == v);
    CHECK_THROWS_AS(clean(v, 0, 0), std::invalid_argument);
    CHECK(clean(BinaryVolume(Dims{3, 3, 3}), 2, 64).count() == 0);

    SUBCASE("equal sizes keep the first in scan order") {
        const BinaryVolume pair = volume_with(Dims{5, 1, 1}, {{0, 0, 0}, {4, 0, 0}});
        const BinaryVolume one = clean(pair, 1, 0);
        CHECK(one.get(0, 0, 0));
        CHECK_FALSE(one.get(4, 0, 0));
    }
    CHECK_THROWS_AS(clean(v, -1, 0), std::invalid_argument);
}

TEST_CASE("clean agrees with the naive kernel") {
    Rng rng(404);
    for (int trial = 0; trial < 40; ++trial) {
        const BinaryVolume v = random_volume(rng, random_dims(rng, 1, 16), rng.uniform(0.05, 0.5));
        const int keep = rng.between(1, 4);
        const std::size_t min_voxels = rng.below(6);
        for (Connectivity c : {Connectivity::six, Connectivity::twentysix}) {
            CHECK(clean(v, keep, min_voxels, c) == reference::clean(v, keep, min_voxels, c));
        }
    }
}

TEST_CASE("majority examples") {
    SUBCASE("isolated voxel disappears") {
        CHECK(majority(volume_with(Dims{5, 5, 5}, {{2, 2, 2}})).count() == 0);
    }
    SUBCASE("3x3x3 all-ones grid") {
        const BinaryVolume v = BinaryVolume::filled(Dims{3, 3, 3}, true);
        // Center sees 27, face centers 18, edges 12, corners 8.
        CHECK(neighborhood_count(v, 1, 1, 1) == 27);
        CHECK(neighborhood_count(v, 1, 1, 0) == 18);
        CHECK(neighborhood_count(v, 1, 0, 0) == 12);
        CHECK(neighborhood_count(v, 0, 0, 0) == 8);
        const BinaryVolume m = majority(v);
        CHECK(m.count() == 7);
        BinaryVolume expected(Dims{3, 3, 3});
        for (const Offset& o : kCross.offsets()) expected.set(1 + o.dx, 1 + o.dy, 1 + o.dz, true);
        CHECK(m == expected);
    }
    SUBCASE("9x9x9 all-ones grid") {
        const BinaryVolume v = BinaryVolume::filled(Dims{9, 9, 9}, true);
        std::size_t expected = 0;
        for (int z = 0; z < 9; ++z)
            for (int y = 0; y < 9; ++y)
                for (int x = 0; x < 9; ++x) expected += neighborhood_count(v, x, y, z) >= 14 ? 1 : 0;
        CHECK(expected == 637);
        CHECK(majority(v).count() == 637);
    }
    SUBCASE("a background voxel inside a solid block is added") {
        BinaryVolume v(Dims{5, 5, 5});
        set_box(v, {1, 1, 1}, {3, 3, 3});
        v.set(2, 2, 2, false);
        CHECK(majority(v).get(2, 2, 2));
        CHECK_FALSE(majority_remove_only(v).get(2, 2, 2));
    }
    CHECK_THROWS_AS(majority(BinaryVolume(Dims{1, 1, 1}), 0), std::invalid_argument);
    CHECK_THROWS_AS(majority(BinaryVolume(Dims{1, 1, 1}), 28), std::invalid_argument);
}

TEST_CASE("bit-sliced majority agrees with the naive kernel") {
    Rng rng(505);
    for (int trial = 0; trial < 60; ++trial) {
        const Dims dims{rng.between(1, 140), rng.between(1, 7), rng.between(1, 7)};
        const BinaryVolume v = random_volume(rng, dims, rng.uniform(0.05, 0.95));
        const int threshold = rng.between(1, 27);
        CHECK(majority(v, threshold) == reference::majority(v, threshold));
        CHECK(majority_remove_only(v, threshold) == intersect(reference::majority(v, threshold), v));
    }
}

TEST_CASE("fill examples") {
    SUBCASE("hollow cube shell") {
        BinaryVolume v(Dims{5, 5, 5});
        set_box(v, {1, 1, 1}, {3, 3, 3});
        v.set(2, 2, 2, false);
        const BinaryVolume f = fill(v);
        CHECK(f.count() == 27);
        CHECK(f.get(2, 2, 2));
    }
    SUBCASE("a cavity open to the border stays open") {
        BinaryVolume v(Dims{3, 3, 3});
        set_box(v, {0, 0, 0}, {2, 2, 2});
        v.set(1, 1, 1, false);
        v.set(1, 1, 0, false);
        CHECK(fill(v) == v);
    }
    SUBCASE("diagonal leak only under 26-connected background") {
        // A 6-closed shell whose cavity touches the outside through a corner.
        BinaryVolume v(Dims{4, 4, 4});
        set_box(v, {0, 0, 0}, {3, 3, 3});
        v.set(1, 1, 1, false);
        v.set(0, 0, 0, false);
        v.set(1, 0, 0, true);
        CHECK(fill(v, Connectivity::six).get(1, 1, 1));
        CHECK_FALSE(fill(v, Connectivity::twentysix).get(1, 1, 1));
    }
    SUBCASE("fill is idempotent and extensive") {
        Rng rng(606);
        for (int trial = 0; trial < 40; ++trial) {
            const BinaryVolume v = random_volume(rng, random_dims(rng, 1, 14), rng.uniform(0.3, 0.9));
            for (Connectivity c : {Connectivity::six, Connectivity::twentysix}) {
                const BinaryVolume f = fill(v, c);
                CHECK(f == reference::fill(v, c));
                CHECK(is_subset(v, f));
                CHECK(fill(f, c) == f);
            }
        }
    }
}
