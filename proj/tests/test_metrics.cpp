#include <doctest.h>

#include "binmorph/metrics.hpp"
#include "binmorph/phantom.hpp"
#include "binmorph/pipeline.hpp"
#include "test_support.hpp"

using namespace binmorph;
using namespace binmorph::testing;

namespace {

struct BruteOverlap {
    double dice;
    double iou;
};

BruteOverlap brute_overlap(const BinaryVolume& a, const BinaryVolume& b) {
    long na = 0, nb = 0, both = 0;
    for (int z = 0; z < a.nz(); ++z)
        for (int y = 0; y < a.ny(); ++y)
            for (int x = 0; x < a.nx(); ++x) {
                const bool pa = a.get(x, y, z);
                const bool pb = b.get(x, y, z);
                na += pa;
                nb += pb;
                both += pa && pb;
            }
    if (na + nb == 0) return {1.0, 1.0};
    return {2.0 * both / static_cast<double>(na + nb), both / static_cast<double>(na + nb - both)};
}

SliceMask slice_with(int w, int h, std::initializer_list<std::pair<int, int>> px) {
    SliceMask s(w, h);
    for (auto [x, y] : px) s.set(x, y, true);
    return s;
}

void fill_rect(SliceMask& s, int x0, int y0, int x1, int y1) {
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) s.set(x, y, true);
}

SliceMask mirror_x(const SliceMask& s) {
    SliceMask out(s.width, s.height);
    for (int y = 0; y < s.height; ++y)
        for (int x = 0; x < s.width; ++x) out.set(s.width - 1 - x, y, s.at(x, y));
    return out;
}

}  // namespace

TEST_CASE("dice and iou examples") {
    const BinaryVolume a = volume_with(Dims{4, 2, 1}, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}});
    const BinaryVolume b = volume_with(Dims{4, 2, 1}, {{2, 0, 0}, {3, 0, 0}, {0, 1, 0}, {1, 1, 0}});
    const BinaryVolume empty(Dims{4, 2, 1});
    CHECK(dice(a, b) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(iou(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(dice(a, a) == 1.0);
    CHECK(iou(a, a) == 1.0);
    CHECK(dice(a, complement(a)) == 0.0);
    CHECK(dice(empty, empty) == 1.0);
    CHECK(iou(empty, empty) == 1.0);
    CHECK(dice(a, empty) == 0.0);
    CHECK(iou(empty, a) == 0.0);
    CHECK_THROWS_AS(dice(a, BinaryVolume(Dims{4, 2, 2})), std::invalid_argument);
    CHECK_THROWS_AS(iou(a, BinaryVolume(Dims{4, 1, 1})), std::invalid_argument);
}

TEST_CASE("metric identities on random pairs") {
    Rng rng(808);
    for (int trial = 0; trial < 100; ++trial) {
        const Dims dims = random_dims(rng, 1, 20);
        const BinaryVolume a = random_volume(rng, dims, rng.uniform(0.0, 1.0));
        const BinaryVolume b = random_volume(rng, dims, rng.uniform(0.0, 1.0));
        const double d = dice(a, b);
        const double j = iou(a, b);
        const BruteOverlap brute = brute_overlap(a, b);
        CHECK(d == doctest::Approx(brute.dice).epsilon(1e-12));
        CHECK(j == doctest::Approx(brute.iou).epsilon(1e-12));
        CHECK(d == dice(b, a));
        CHECK(j == iou(b, a));
        CHECK(std::abs(j - d / (2.0 - d)) <= 1e-12);
        CHECK(j <= d);
        CHECK((d == 1.0) == (a == b));
    }
}

TEST_CASE("slice_instances examples") {
    SUBCASE("missed component is a false negative") {
        SliceMask gt(8, 8);
        fill_rect(gt, 2, 2, 4, 4);
        CHECK(slice_instances(gt, SliceMask(8, 8)) == InstanceCounts{0, 0, 1});
    }
    SUBCASE("one match plus a stray prediction") {
        SliceMask gt(12, 6);
        fill_rect(gt, 0, 0, 4, 1);  // 10 pixels
        SliceMask pred(12, 6);
        fill_rect(pred, 0, 0, 2, 1);  // 6 pixels inside gt
        fill_rect(pred, 9, 4, 10, 5);
        // IoU of the overlapping pair, counted pixel by pixel.
        int inter = 0, uni = 0;
        for (int y = 0; y < 6; ++y)
            for (int x = 0; x < 9; ++x) {
                inter += gt.at(x, y) && pred.at(x, y);
                uni += gt.at(x, y) || pred.at(x, y);
            }
        CHECK(static_cast<double>(inter) / uni == doctest::Approx(0.6));
        CHECK(slice_instances(gt, pred) == InstanceCounts{1, 1, 0});
        CHECK(slice_instances(gt, pred, 0.7) == InstanceCounts{0, 2, 1});
    }
    SUBCASE("both empty") {
        CHECK(slice_instances(SliceMask(5, 5), SliceMask(5, 5)) == InstanceCounts{0, 0, 0});
    }
    SUBCASE("diagonal pixels form one 8-connected component") {
        const SliceMask gt = slice_with(4, 4, {{0, 0}, {1, 1}, {2, 2}});
        CHECK(slice_instances(gt, gt) == InstanceCounts{1, 0, 0});
    }
    SUBCASE("one prediction cannot match two truths") {
        SliceMask gt(9, 3);
        fill_rect(gt, 0, 0, 2, 2);
        fill_rect(gt, 6, 0, 8, 2);
        SliceMask pred(9, 3);
        fill_rect(pred, 0, 0, 8, 2);
        // The merged prediction covers both (IoU 9/27 each), below 0.5.
        CHECK(slice_instances(gt, pred) == InstanceCounts{0, 1, 2});
        CHECK(slice_instances(gt, pred, 0.3) == InstanceCounts{1, 0, 1});
    }
    SUBCASE("result does not depend on discovery order") {
        Rng rng(12);
        for (int trial = 0; trial < 40; ++trial) {
            SliceMask gt(20, 15), pred(20, 15);
            for (auto& b : gt.bits) b = rng.chance(0.3);
            for (auto& b : pred.bits) b = rng.chance(0.3);
            CHECK(slice_instances(gt, pred) == slice_instances(mirror_x(gt), mirror_x(pred)));
        }
    }
    CHECK_THROWS_AS(slice_instances(SliceMask(2, 2), SliceMask(3, 2)), std::invalid_argument);
    CHECK_THROWS_AS(slice_instances(SliceMask(2, 2), SliceMask(2, 2), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(slice_instances(SliceMask(2, 2), SliceMask(2, 2), 1.5), std::invalid_argument);
}

TEST_CASE("score_exam") {
    const PhantomSpec spec = PhantomSpec::sample(5, 64);
    const BinaryVolume gt = generate_ground_truth(spec);

    SUBCASE("perfect prediction") {
        const ExamScore s = score_exam("e", gt, gt, gt);
        CHECK(s.exam_id == "e");
        CHECK(s.dice_raw == 1.0);
        CHECK(s.iou_post == 1.0);
        CHECK(s.fp == 0);
        CHECK(s.fn == 0);
        CHECK(s.tp == volume_instances(gt, gt).tp);
        CHECK(s.tp >= static_cast<std::size_t>(gt.nz() / 2));
    }
    SUBCASE("empty prediction") {
        const BinaryVolume none = BinaryVolume::zeros_like(gt);
        const ExamScore s = score_exam("e", gt, none, none);
        CHECK(s.dice_raw == 0.0);
        CHECK(s.iou_post == 0.0);
        CHECK(s.tp == 0);
        CHECK(s.fp == 0);
        std::size_t components = 0;
        for (int z = 0; z < gt.nz(); ++z) {
            const BinaryVolume plane = [&] {
                BinaryVolume p(Dims{gt.nx(), gt.ny(), 1});
                for (int y = 0; y < gt.ny(); ++y)
                    for (int x = 0; x < gt.nx(); ++x) p.set(x, y, 0, gt.get(x, y, z));
                return p;
            }();
            components += label_components(plane, Connectivity::twentysix).component_count();
        }
        CHECK(s.fn == components);
    }
    SUBCASE("perturbed phantom matches the voxel-count oracle") {
        PerturbationSpec p;
        p.speckle_count = 3;
        p.speckle_max_size = 10;
        p.hole_count = 2;
        p.hole_max_radius = 2;
        p.boundary_flip_probability = 0.05;
        p.seed = 9;
        const BinaryVolume raw = perturb(gt, p);
        const BinaryVolume post = run_pipeline(raw, PipelineSpec::default_spec());
        const ExamScore s = score_exam("e", gt, raw, post);
        const BruteOverlap r = brute_overlap(gt, raw);
        const BruteOverlap q = brute_overlap(gt, post);
        CHECK(s.dice_raw == doctest::Approx(r.dice).epsilon(1e-12));
        CHECK(s.iou_raw == doctest::Approx(r.iou).epsilon(1e-12));
        CHECK(s.dice_post == doctest::Approx(q.dice).epsilon(1e-12));
        CHECK(s.iou_post == doctest::Approx(q.iou).epsilon(1e-12));
        const ExamScore again = score_exam("e", gt, raw, post);
        CHECK(again.dice_post == s.dice_post);
        CHECK(again.tp == s.tp);
    }
    CHECK_THROWS_AS(score_exam("e", gt, BinaryVolume(Dims{1, 1, 1}), gt), std::invalid_argument);
}
