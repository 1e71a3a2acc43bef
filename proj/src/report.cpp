#include "binmorph/report.hpp"

#include <stdexcept>

#include "binmorph/io.hpp"

namespace binmorph {

namespace {

constexpr int kSummaryDigits = 12;

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

std::string cell(const MeanSd& m) {
    return format_fixed(m.mean, kSummaryDigits) + "±" + format_fixed(m.sd, kSummaryDigits);
}

FoldRole parse_role(std::string_view s) {
    if (s == "test") return FoldRole::test;
    if (s == "val") return FoldRole::val;
    if (s == "train") return FoldRole::train;
    throw FormatError("report: unknown role '" + std::string(s) + "'");
}

struct SummaryRow {
    const char* method;
    const char* metric;
    MeanSd MetricStats::*member;
};

constexpr SummaryRow kSummaryRows[] = {
    {"raw", "dice", &MetricStats::dice_raw},
    {"raw", "iou", &MetricStats::iou_raw},
    {"post", "dice", &MetricStats::dice_post},
    {"post", "iou", &MetricStats::iou_post},
};

}  // namespace

std::string format_report_csv(std::span<const ExamScore> scores, const FoldAssignment& assignment) {
    std::string out(kReportHeader);
    out += "\n";
    for (const ExamScore& s : scores) {
        if (s.exam_id.find_first_of(",\n\"") != std::string::npos) {
            throw std::invalid_argument("exam id '" + s.exam_id + "' cannot be written to CSV");
        }
        const auto fold = assignment.test_fold(s.exam_id);
        if (!fold) throw std::invalid_argument("report: exam '" + s.exam_id + "' has no test fold");
        out += s.exam_id + "," + std::to_string(*fold + 1) + ",test," + format_number(s.dice_raw) + "," +
               format_number(s.iou_raw) + "," + format_number(s.dice_post) + "," + format_number(s.iou_post) + "," +
               std::to_string(s.tp) + "," + std::to_string(s.fp) + "," + std::to_string(s.fn) + "\n";
    }
    return out;
}

std::vector<ReportRow> parse_report_csv(std::string_view text) {
    std::vector<ReportRow> rows;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        start = end + 1;
        ++line_no;
        if (line_no == 1) {
            if (line != kReportHeader) {
                throw FormatError("report: unexpected header '" + std::string(line) + "'");
            }
            continue;
        }
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 10) {
            throw FormatError("report line " + std::to_string(line_no) + ": expected 10 fields, got " +
                              std::to_string(f.size()));
        }
        ReportRow row;
        row.score.exam_id = std::string(f[0]);
        row.fold = static_cast<std::size_t>(parse_int(f[1], "fold"));
        row.role = parse_role(f[2]);
        row.score.dice_raw = parse_double(f[3], "dice_raw");
        row.score.iou_raw = parse_double(f[4], "iou_raw");
        row.score.dice_post = parse_double(f[5], "dice_post");
        row.score.iou_post = parse_double(f[6], "iou_post");
        row.score.tp = static_cast<std::size_t>(parse_int(f[7], "tp"));
        row.score.fp = static_cast<std::size_t>(parse_int(f[8], "fp"));
        row.score.fn = static_cast<std::size_t>(parse_int(f[9], "fn"));
        rows.push_back(std::move(row));
    }
    if (line_no == 0) throw FormatError("report: empty file");
    return rows;
}

std::string format_summary_csv(const FoldReport& report) {
    std::string out = "method,metric";
    for (const FoldStats& f : report.per_fold) out += ",fold_" + std::to_string(f.fold_index + 1);
    out += ",average,mean_of_folds\n";

    for (const SummaryRow& row : kSummaryRows) {
        out += std::string(row.method) + "," + row.metric;
        for (const FoldStats& f : report.per_fold) out += "," + cell(f.stats.*row.member);
        out += "," + cell(report.average.*row.member) + "," + cell(report.mean_of_folds.*row.member) + "\n";
    }

    const auto delta_row = [&](const char* metric, MeanSd MetricStats::*raw, MeanSd MetricStats::*post,
                               double pooled) {
        out += std::string("delta_pp,") + metric;
        double sum = 0.0;
        for (const FoldStats& f : report.per_fold) {
            const double d = ((f.stats.*post).mean - (f.stats.*raw).mean) * 100.0;
            sum += d;
            out += "," + format_fixed(d, kSummaryDigits);
        }
        out += "," + format_fixed(pooled, kSummaryDigits) + "," +
               format_fixed(sum / static_cast<double>(report.per_fold.size()), kSummaryDigits) + "\n";
    };
    delta_row("dice", &MetricStats::dice_raw, &MetricStats::dice_post, report.delta_dice_pp);
    delta_row("iou", &MetricStats::iou_raw, &MetricStats::iou_post, report.delta_iou_pp);
    return out;
}

std::string format_summary_markdown(const FoldReport& report) {
    const auto short_cell = [](const MeanSd& m) { return format_fixed(m.mean, 3) + "±" + format_fixed(m.sd, 3); };
    std::string out = "| Method / Metric |";
    for (const FoldStats& f : report.per_fold) out += " Fold " + std::to_string(f.fold_index + 1) + " |";
    out += " Average |\n|---|";
    for (std::size_t i = 0; i <= report.per_fold.size(); ++i) out += "---|";
    out += "\n";
    const char* labels[] = {"Raw / Dice", "Raw / IoU", "Post-processed / Dice", "Post-processed / IoU"};
    for (std::size_t r = 0; r < std::size(kSummaryRows); ++r) {
        out += std::string("| ") + labels[r] + " |";
        for (const FoldStats& f : report.per_fold) out += " " + short_cell(f.stats.*kSummaryRows[r].member) + " |";
        out += " " + short_cell(report.average.*kSummaryRows[r].member) + " |\n";
    }
    out += "\nImprovement from post-processing: Dice " + format_fixed(report.delta_dice_pp, 1) + " pp, IoU " +
           format_fixed(report.delta_iou_pp, 1) + " pp (n = " + std::to_string(report.exam_count) + ")\n";
    return out;
}

std::string format_histogram_csv(std::span<const HistogramBin> dice_bins, std::span<const HistogramBin> iou_bins) {
    if (dice_bins.size() != iou_bins.size()) {
        throw std::invalid_argument("histogram CSV: dice and IoU bin counts differ");
    }
    std::string out(kHistogramHeader);
    out += "\n";
    for (std::size_t k = 0; k < dice_bins.size(); ++k) {
        out += format_number(dice_bins[k].lo) + "," + format_number(dice_bins[k].hi) + "," +
               std::to_string(dice_bins[k].count) + "," + std::to_string(iou_bins[k].count) + "\n";
    }
    return out;
}

std::string format_evaluation_csv(double dice_value, double iou_value, const InstanceCounts& counts) {
    return std::string(kEvaluationHeader) + "\n" + format_number(dice_value) + "," + format_number(iou_value) + "," +
           std::to_string(counts.tp) + "," + std::to_string(counts.fp) + "," + std::to_string(counts.fn) + "\n";
}

}  // namespace binmorph
