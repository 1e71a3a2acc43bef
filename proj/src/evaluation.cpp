#include "binmorph/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "binmorph/rng.hpp"

namespace binmorph {

std::string_view role_name(FoldRole role) {
    switch (role) {
        case FoldRole::train: return "train";
        case FoldRole::val: return "val";
        case FoldRole::test: return "test";
    }
    return "?";
}

FoldAssignment::FoldAssignment(std::vector<std::string> exam_ids, std::vector<Fold> folds, std::uint64_t seed)
    : exam_ids_(std::move(exam_ids)), folds_(std::move(folds)), seed_(seed) {
    if (folds_.empty()) {
        throw std::invalid_argument("fold assignment needs at least one fold");
    }
    const std::set<std::string> all(exam_ids_.begin(), exam_ids_.end());
    if (all.size() != exam_ids_.size()) {
        throw std::invalid_argument("fold assignment: exam ids must be unique");
    }
    std::map<std::string, int> test_hits;
    for (std::size_t f = 0; f < folds_.size(); ++f) {
        const Fold& fold = folds_[f];
        std::multiset<std::string> seen;
        for (const auto* part : {&fold.train, &fold.val, &fold.test}) {
            seen.insert(part->begin(), part->end());
        }
        if (seen.size() != all.size() || !std::equal(seen.begin(), seen.end(), all.begin(), all.end())) {
            throw std::invalid_argument("fold " + std::to_string(f + 1) +
                                        ": train/val/test must be disjoint and cover every exam exactly once");
        }
        for (const std::string& id : fold.test) ++test_hits[id];
    }
    for (const std::string& id : exam_ids_) {
        if (test_hits[id] != 1) {
            throw std::invalid_argument("exam '" + id + "' is tested in " + std::to_string(test_hits[id]) +
                                        " folds, expected exactly 1");
        }
    }
}

bool FoldAssignment::contains(const std::string& exam_id) const {
    return std::find(exam_ids_.begin(), exam_ids_.end(), exam_id) != exam_ids_.end();
}

std::optional<std::size_t> FoldAssignment::test_fold(const std::string& exam_id) const {
    for (std::size_t f = 0; f < folds_.size(); ++f) {
        const auto& test = folds_[f].test;
        if (std::find(test.begin(), test.end(), exam_id) != test.end()) return f;
    }
    return std::nullopt;
}

FoldRole FoldAssignment::role(const std::string& exam_id, std::size_t fold_index) const {
    const Fold& f = folds_.at(fold_index);
    if (std::find(f.test.begin(), f.test.end(), exam_id) != f.test.end()) return FoldRole::test;
    if (std::find(f.val.begin(), f.val.end(), exam_id) != f.val.end()) return FoldRole::val;
    if (std::find(f.train.begin(), f.train.end(), exam_id) != f.train.end()) return FoldRole::train;
    throw std::invalid_argument("exam '" + exam_id + "' is not part of the assignment");
}

std::string FoldAssignment::to_csv() const {
    std::string out = "fold,exam_id,role\n";
    for (std::size_t f = 0; f < folds_.size(); ++f) {
        for (const std::string& id : exam_ids_) {
            out += std::to_string(f + 1) + "," + id + "," + std::string(role_name(role(id, f))) + "\n";
        }
    }
    return out;
}

FoldAssignment split_folds(std::span<const std::string> exam_ids, int fold_count, int val_size, std::uint64_t seed) {
    const auto n = static_cast<long long>(exam_ids.size());
    if (fold_count < 2) {
        throw std::invalid_argument("split_folds: need at least 2 folds, got " + std::to_string(fold_count));
    }
    if (val_size < 0) {
        throw std::invalid_argument("split_folds: validation size must be non-negative");
    }
    if (n < fold_count + val_size) {
        throw std::invalid_argument("split_folds: " + std::to_string(n) + " exams are too few for " +
                                    std::to_string(fold_count) + " folds with " + std::to_string(val_size) +
                                    " validation exams");
    }
    const long long largest_test = (n + fold_count - 1) / fold_count;
    if (val_size > n - largest_test) {
        throw std::invalid_argument("split_folds: validation size " + std::to_string(val_size) +
                                    " exceeds the " + std::to_string(n - largest_test) + " non-test exams per fold");
    }

    std::vector<std::string> order(exam_ids.begin(), exam_ids.end());
    Rng rng(seed);
    rng.shuffle(std::span<std::string>(order));

    std::vector<Fold> folds(static_cast<std::size_t>(fold_count));
    const long long base = n / fold_count;
    const long long extra = n % fold_count;
    long long start = 0;
    for (int f = 0; f < fold_count; ++f) {
        const long long size = base + (f < extra ? 1 : 0);
        Fold& fold = folds[static_cast<std::size_t>(f)];
        // Walk the shuffled order starting at this fold's test block.
        for (long long i = 0; i < n; ++i) {
            const std::string& id = order[static_cast<std::size_t>((start + i) % n)];
            if (i < size) {
                fold.test.push_back(id);
            } else if (i < size + val_size) {
                fold.val.push_back(id);
            } else {
                fold.train.push_back(id);
            }
        }
        start += size;
    }
    return FoldAssignment(std::vector<std::string>(exam_ids.begin(), exam_ids.end()), std::move(folds), seed);
}

MeanSd mean_sd(std::span<const double> values) {
    if (values.size() < 2) {
        throw std::invalid_argument("sample SD needs at least two values, got " + std::to_string(values.size()));
    }
    // Deviations from the first value, so identical inputs give exactly
    // that value and SD 0.
    const double shift = values[0];
    const auto n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v - shift;
    const double offset = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - shift - offset) * (v - shift - offset);
    return {shift + offset, std::sqrt(ss / (n - 1.0))};
}

namespace {

MetricStats stats_of(const std::vector<const ExamScore*>& scores) {
    std::vector<double> dr, ir, dp, ip;
    for (const ExamScore* s : scores) {
        dr.push_back(s->dice_raw);
        ir.push_back(s->iou_raw);
        dp.push_back(s->dice_post);
        ip.push_back(s->iou_post);
    }
    return {mean_sd(dr), mean_sd(ir), mean_sd(dp), mean_sd(ip)};
}

}  // namespace

FoldReport aggregate(std::span<const ExamScore> scores, const FoldAssignment& assignment) {
    std::unordered_map<std::string, std::size_t> fold_of;
    for (std::size_t f = 0; f < assignment.fold_count(); ++f) {
        for (const std::string& id : assignment.fold(f).test) fold_of[id] = f;
    }

    std::vector<std::vector<const ExamScore*>> grouped(assignment.fold_count());
    std::vector<const ExamScore*> all;
    std::set<std::string> seen;
    for (const ExamScore& s : scores) {
        const auto it = fold_of.find(s.exam_id);
        if (it == fold_of.end()) {
            throw std::invalid_argument("aggregate: exam '" + s.exam_id + "' is scored but not assigned to a fold");
        }
        if (!seen.insert(s.exam_id).second) {
            throw std::invalid_argument("aggregate: exam '" + s.exam_id + "' is scored twice");
        }
        grouped[it->second].push_back(&s);
        all.push_back(&s);
    }

    FoldReport report;
    for (std::size_t f = 0; f < grouped.size(); ++f) {
        if (grouped[f].size() < 2) {
            throw std::invalid_argument("aggregate: fold " + std::to_string(f + 1) + " has " +
                                        std::to_string(grouped[f].size()) +
                                        " scored test exams; SD needs at least 2");
        }
        report.per_fold.push_back({f, grouped[f].size(), stats_of(grouped[f])});
    }
    report.average = stats_of(all);
    report.exam_count = all.size();

    const auto fold_mean = [&](auto member) {
        MeanSd out;
        for (const FoldStats& fs : report.per_fold) {
            out.mean += (fs.stats.*member).mean;
            out.sd += (fs.stats.*member).sd;
        }
        const auto k = static_cast<double>(report.per_fold.size());
        out.mean /= k;
        out.sd /= k;
        return out;
    };
    report.mean_of_folds = {fold_mean(&MetricStats::dice_raw), fold_mean(&MetricStats::iou_raw),
                            fold_mean(&MetricStats::dice_post), fold_mean(&MetricStats::iou_post)};
    report.delta_dice_pp = (report.average.dice_post.mean - report.average.dice_raw.mean) * 100.0;
    report.delta_iou_pp = (report.average.iou_post.mean - report.average.iou_raw.mean) * 100.0;
    return report;
}

std::vector<HistogramBin> histogram(std::span<const double> values, double bin_width) {
    if (!(bin_width > 0.0 && bin_width <= 1.0)) {
        throw std::invalid_argument("histogram: bin width must lie in (0, 1]");
    }
    // Values within 1e-9 of a bin edge snap to the bin above it, so that
    // e.g. 0.3 lands in [0.3, 0.4) despite 0.3 / 0.1 < 3 in binary.
    constexpr double kEdgeSlack = 1e-9;
    const auto bins = static_cast<std::size_t>(std::ceil(1.0 / bin_width - kEdgeSlack));
    std::vector<HistogramBin> out(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        out[k].lo = std::round(static_cast<double>(k) * bin_width * 1e12) / 1e12;
        out[k].hi = k + 1 == bins ? 1.0 : std::round(static_cast<double>(k + 1) * bin_width * 1e12) / 1e12;
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("histogram: value at index " + std::to_string(i) + " (" + std::to_string(v) +
                                        ") outside [0, 1]");
        }
        const auto k = std::min(bins - 1, static_cast<std::size_t>(std::floor(v / bin_width + kEdgeSlack)));
        ++out[k].count;
    }
    return out;
}

std::size_t count_at_or_above(std::span<const double> values, double threshold) {
    return static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [&](double v) { return v >= threshold; }));
}

}  // namespace binmorph
