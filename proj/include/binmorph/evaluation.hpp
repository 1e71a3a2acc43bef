#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "binmorph/metrics.hpp"

namespace binmorph {

enum class FoldRole { train, val, test };

std::string_view role_name(FoldRole role);

struct Fold {
    std::vector<std::string> train;
    std::vector<std::string> val;
    std::vector<std::string> test;
    friend bool operator==(const Fold&, const Fold&) = default;
};

/// Cross-validation split. Each exam is a test exam in exactly one fold, and
/// within every fold train/val/test partition the full exam set.
class FoldAssignment {
public:
    /// Validates the partition invariants; throws std::invalid_argument.
    FoldAssignment(std::vector<std::string> exam_ids, std::vector<Fold> folds, std::uint64_t seed = 0);

    std::size_t fold_count() const { return folds_.size(); }
    std::uint64_t seed() const { return seed_; }
    const std::vector<std::string>& exam_ids() const { return exam_ids_; }
    const Fold& fold(std::size_t index) const { return folds_.at(index); }
    const std::vector<Fold>& folds() const { return folds_; }

    bool contains(const std::string& exam_id) const;
    /// Fold in which the exam is tested; nullopt for unknown exams.
    std::optional<std::size_t> test_fold(const std::string& exam_id) const;
    FoldRole role(const std::string& exam_id, std::size_t fold_index) const;

    /// Canonical text form, one `fold,exam_id,role` line per exam and fold,
    /// folds numbered from 1. Equal assignments give identical text.
    std::string to_csv() const;

    friend bool operator==(const FoldAssignment&, const FoldAssignment&) = default;

private:
    std::vector<std::string> exam_ids_;
    std::vector<Fold> folds_;
    std::uint64_t seed_ = 0;
};

/// Seeded k-fold split. The exams are shuffled (Fisher-Yates over
/// std::mt19937_64(seed)) and cut into fold_count contiguous test blocks, the
/// first n % fold_count blocks one exam larger. Each fold's validation exams
/// are the val_size exams following its test block in the shuffled order,
/// wrapping around; the rest train.
FoldAssignment split_folds(std::span<const std::string> exam_ids, int fold_count, int val_size, std::uint64_t seed);

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;  // sample SD, n - 1 denominator
};

/// Mean and sample SD. Requires at least two values.
MeanSd mean_sd(std::span<const double> values);

struct MetricStats {
    MeanSd dice_raw;
    MeanSd iou_raw;
    MeanSd dice_post;
    MeanSd iou_post;
};

struct FoldStats {
    std::size_t fold_index = 0;
    std::size_t exam_count = 0;
    MetricStats stats;
};

struct FoldReport {
    std::vector<FoldStats> per_fold;
    /// Pooled over every scored exam.
    MetricStats average;
    std::size_t exam_count = 0;
    /// Mean of the per-fold means, and mean of the per-fold SDs.
    MetricStats mean_of_folds;
    /// (mean_post - mean_raw) * 100 on the pooled row.
    double delta_dice_pp = 0.0;
    double delta_iou_pp = 0.0;
};

/// Per-fold statistics over each fold's test exams plus the pooled row.
/// Throws when a scored exam is missing from the assignment or a fold has
/// fewer than two scored test exams.
FoldReport aggregate(std::span<const ExamScore> scores, const FoldAssignment& assignment);

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
};

/// Bins [k*w, (k+1)*w) over [0, 1], the last bin closed at 1. Values must lie
/// in [0, 1]; the offending index is reported otherwise.
std::vector<HistogramBin> histogram(std::span<const double> values, double bin_width);

std::size_t count_at_or_above(std::span<const double> values, double threshold);

}  // namespace binmorph
