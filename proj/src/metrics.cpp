#include "binmorph/metrics.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "binmorph/morphology.hpp"

namespace binmorph {

namespace {

void require_same_dims(const BinaryVolume& a, const BinaryVolume& b, const char* what) {
    if (!same_grid(a, b)) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch " + to_string(a.dims()) + " vs " +
                                    to_string(b.dims()));
    }
}

void require_match_iou(double match_iou) {
    if (!(match_iou > 0.0 && match_iou <= 1.0)) {
        throw std::invalid_argument("match IoU must lie in (0, 1], got " + std::to_string(match_iou));
    }
}

BinaryVolume slice_as_volume(const SliceMask& s) {
    BinaryVolume v(Dims{s.width, s.height, 1});
    for (int y = 0; y < s.height; ++y) {
        for (int x = 0; x < s.width; ++x) {
            if (s.at(x, y)) v.set(x, y, 0, true);
        }
    }
    return v;
}

BinaryVolume plane(const BinaryVolume& v, int z) {
    BinaryVolume out(Dims{v.nx(), v.ny(), 1}, v.spacing());
    for (int y = 0; y < v.ny(); ++y) {
        auto src = v.row(y, z);
        std::copy(src.begin(), src.end(), out.row(y, 0).begin());
    }
    return out;
}

// With a single plane, 26-connectivity reduces to 8-connectivity.
InstanceCounts match_instances(const BinaryVolume& gt, const BinaryVolume& pred, double match_iou) {
    const ComponentLabeling g = label_components(gt, Connectivity::twentysix);
    const ComponentLabeling p = label_components(pred, Connectivity::twentysix);

    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> shared;
    for (std::size_t i = 0; i < g.labels.size(); ++i) {
        if (g.labels[i] != 0 && p.labels[i] != 0) ++shared[{g.labels[i], p.labels[i]}];
    }

    struct Candidate {
        std::uint32_t gt_label;
        std::uint32_t pred_label;
        std::size_t inter;
        std::size_t uni;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(shared.size());
    for (const auto& [labels, inter] : shared) {
        const std::size_t uni = g.size_of(labels.first) + p.size_of(labels.second) - inter;
        candidates.push_back({labels.first, labels.second, inter, uni});
    }
    // IoU compared as exact fractions: a/b > c/d  <=>  a*d > c*b.
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        const auto lhs = static_cast<std::uint64_t>(a.inter) * b.uni;
        const auto rhs = static_cast<std::uint64_t>(b.inter) * a.uni;
        if (lhs != rhs) return lhs > rhs;
        return std::tie(a.gt_label, a.pred_label) < std::tie(b.gt_label, b.pred_label);
    });

    std::vector<bool> gt_used(g.component_count() + 1, false);
    std::vector<bool> pred_used(p.component_count() + 1, false);
    InstanceCounts counts;
    for (const Candidate& c : candidates) {
        if (gt_used[c.gt_label] || pred_used[c.pred_label]) continue;
        const double value = static_cast<double>(c.inter) / static_cast<double>(c.uni);
        if (value < match_iou) break;
        gt_used[c.gt_label] = true;
        pred_used[c.pred_label] = true;
        ++counts.tp;
    }
    counts.fn = g.component_count() - counts.tp;
    counts.fp = p.component_count() - counts.tp;
    return counts;
}

}  // namespace

OverlapCounts overlap(const BinaryVolume& a, const BinaryVolume& b) {
    require_same_dims(a, b, "overlap");
    OverlapCounts c;
    auto aw = a.words();
    auto bw = b.words();
    for (std::size_t i = 0; i < aw.size(); ++i) {
        c.a += static_cast<std::size_t>(std::popcount(aw[i]));
        c.b += static_cast<std::size_t>(std::popcount(bw[i]));
        c.intersection += static_cast<std::size_t>(std::popcount(aw[i] & bw[i]));
    }
    return c;
}

double dice(const OverlapCounts& c) {
    if (c.a + c.b == 0) return 1.0;
    return static_cast<double>(2 * c.intersection) / static_cast<double>(c.a + c.b);
}

double iou(const OverlapCounts& c) {
    if (c.union_size() == 0) return 1.0;
    return static_cast<double>(c.intersection) / static_cast<double>(c.union_size());
}

double dice(const BinaryVolume& a, const BinaryVolume& b) {
    return dice(overlap(a, b));
}

double iou(const BinaryVolume& a, const BinaryVolume& b) {
    return iou(overlap(a, b));
}

InstanceCounts slice_instances(const SliceMask& gt, const SliceMask& pred, double match_iou) {
    require_match_iou(match_iou);
    if (gt.width != pred.width || gt.height != pred.height) {
        throw std::invalid_argument("slice_instances: dimension mismatch");
    }
    return match_instances(slice_as_volume(gt), slice_as_volume(pred), match_iou);
}

InstanceCounts volume_instances(const BinaryVolume& gt, const BinaryVolume& pred, double match_iou) {
    require_match_iou(match_iou);
    require_same_dims(gt, pred, "volume_instances");
    InstanceCounts total;
    for (int z = 0; z < gt.nz(); ++z) {
        total += match_instances(plane(gt, z), plane(pred, z), match_iou);
    }
    return total;
}

ExamScore score_exam(std::string exam_id, const BinaryVolume& gt, const BinaryVolume& pred_raw,
                     const BinaryVolume& pred_post, double match_iou) {
    require_same_dims(gt, pred_raw, "score_exam");
    require_same_dims(gt, pred_post, "score_exam");
    const OverlapCounts raw = overlap(gt, pred_raw);
    const OverlapCounts post = overlap(gt, pred_post);
    const InstanceCounts inst = volume_instances(gt, pred_post, match_iou);

    ExamScore s;
    s.exam_id = std::move(exam_id);
    s.dice_raw = dice(raw);
    s.iou_raw = iou(raw);
    s.dice_post = dice(post);
    s.iou_post = iou(post);
    s.tp = inst.tp;
    s.fp = inst.fp;
    s.fn = inst.fn;
    return s;
}

}  // namespace binmorph
