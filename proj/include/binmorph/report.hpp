#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "binmorph/evaluation.hpp"
#include "binmorph/metrics.hpp"

namespace binmorph {

/// One line of the per-exam report.
struct ReportRow {
    ExamScore score;
    std::size_t fold = 0;  // 1-based test fold
    FoldRole role = FoldRole::test;
};

inline constexpr std::string_view kReportHeader = "exam_id,fold,role,dice_raw,iou_raw,dice_post,iou_post,tp,fp,fn";
inline constexpr std::string_view kHistogramHeader = "bin_lo,bin_hi,count_dice,count_iou";
inline constexpr std::string_view kEvaluationHeader = "dice,iou,tp,fp,fn";

/// One row per scored exam in its test fold, in the order given. Metric
/// values use the shortest round-trip decimal form.
std::string format_report_csv(std::span<const ExamScore> scores, const FoldAssignment& assignment);
std::vector<ReportRow> parse_report_csv(std::string_view text);

/// Table-1-shaped summary: rows (raw|post|delta_pp) x (dice|iou), one column
/// per fold, then the pooled average and the mean over folds. Cells are
/// "mean±sd" with 12 decimals; delta rows hold plain percentage points.
std::string format_summary_csv(const FoldReport& report);

/// The same numbers rounded to three decimals as a Markdown table.
std::string format_summary_markdown(const FoldReport& report);

std::string format_histogram_csv(std::span<const HistogramBin> dice_bins, std::span<const HistogramBin> iou_bins);

/// Header plus one line for a single prediction/ground-truth pair.
std::string format_evaluation_csv(double dice_value, double iou_value, const InstanceCounts& counts);

}  // namespace binmorph
