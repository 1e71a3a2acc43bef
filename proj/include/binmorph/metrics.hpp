#pragma once

#include <cstddef>
#include <string>

#include "binmorph/volume.hpp"

namespace binmorph {

struct OverlapCounts {
    std::size_t a = 0;             // |A|
    std::size_t b = 0;             // |B|
    std::size_t intersection = 0;  // |A ∩ B|

    std::size_t union_size() const { return a + b - intersection; }
};

OverlapCounts overlap(const BinaryVolume& a, const BinaryVolume& b);

/// 2|A∩B| / (|A| + |B|); 1 when both volumes are empty.
double dice(const BinaryVolume& a, const BinaryVolume& b);
double dice(const OverlapCounts& c);

/// |A∩B| / |A∪B|; 1 when both volumes are empty.
double iou(const BinaryVolume& a, const BinaryVolume& b);
double iou(const OverlapCounts& c);

inline constexpr double kDefaultMatchIou = 0.5;

struct InstanceCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    InstanceCounts& operator+=(const InstanceCounts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
    friend bool operator==(const InstanceCounts&, const InstanceCounts&) = default;
};

/// Instance-level accounting on one slice. Components are 8-connected;
/// predicted and true components are matched greedily by descending IoU
/// (ties: smaller truth label, then smaller prediction label), each at most
/// once. Matches with IoU >= match_iou are true positives; leftover
/// predictions are false positives and leftover truths false negatives.
InstanceCounts slice_instances(const SliceMask& gt, const SliceMask& pred, double match_iou = kDefaultMatchIou);

struct ExamScore {
    std::string exam_id;
    double dice_raw = 0.0;
    double iou_raw = 0.0;
    double dice_post = 0.0;
    double iou_post = 0.0;
    std::size_t tp = 0;  // slice instances, post-processed prediction
    std::size_t fp = 0;
    std::size_t fn = 0;
};

ExamScore score_exam(std::string exam_id, const BinaryVolume& gt, const BinaryVolume& pred_raw,
                     const BinaryVolume& pred_post, double match_iou = kDefaultMatchIou);

/// Slice-instance counts summed over every z plane.
InstanceCounts volume_instances(const BinaryVolume& gt, const BinaryVolume& pred, double match_iou = kDefaultMatchIou);

}  // namespace binmorph
