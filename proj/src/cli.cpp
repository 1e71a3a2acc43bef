#include "binmorph/cli.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "binmorph/dataset.hpp"
#include "binmorph/evaluation.hpp"
#include "binmorph/io.hpp"
#include "binmorph/metrics.hpp"
#include "binmorph/phantom.hpp"
#include "binmorph/pipeline.hpp"
#include "binmorph/report.hpp"
#include "binmorph/rng.hpp"

namespace binmorph::cli {

namespace fs = std::filesystem;

namespace {

PipelineSpec load_pipeline(const std::string& path) {
    if (path.empty()) return PipelineSpec::default_spec();
    try {
        return parse_pipeline(read_file(path));
    } catch (const PipelineError& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

BinaryVolume load_volume(const std::string& path, std::ostream& err) {
    std::vector<std::string> warnings;
    BinaryVolume v = read_volume(path, &warnings);
    for (const auto& w : warnings) err << "warning: " << path << ": " << w << "\n";
    return v;
}

void emit(const std::string& out_path, const std::string& content, std::ostream& out) {
    if (out_path.empty() || out_path == "-") {
        out << content;
    } else {
        write_file_atomic(out_path, content);
    }
}

// Runs work(i) for i in [0, n) on up to `jobs` threads. Failures are
// rethrown after all workers finish, lowest index first.
template <typename Work>
void parallel_for(std::size_t n, unsigned jobs, Work work) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                work(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned threads = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

struct AssembleOptions {
    std::string manifest;
    std::string out;
};

struct PostprocessOptions {
    std::string in;
    std::string pipeline;
    std::string out;
};

struct EvaluateOptions {
    std::string pred;
    std::string gt;
    double match_iou = kDefaultMatchIou;
    std::string out;
};

struct CrossvalOptions {
    std::string dataset;
    int folds = 5;
    int val = 10;
    std::uint64_t seed = 0;
    std::string pipeline;
    double match_iou = kDefaultMatchIou;
    unsigned jobs = 0;
    std::string out;
};

struct HistogramOptions {
    std::string report;
    double bin_width = 0.1;
    std::string variant = "post";
    std::optional<double> threshold;
    std::string out;
};

struct PhantomOptions {
    int count = 0;
    std::uint64_t seed = 0;
    int in_plane = 128;
    int speckle = 10;
    int speckle_size = 63;
    int holes = 3;
    int hole_radius = 3;
    double flip_probability = 0.02;
    int drop_slices = 0;
    std::string out;
};

void do_assemble(const AssembleOptions& o) {
    write_volume(load_manifest_volume(o.manifest), o.out);
}

void do_postprocess(const PostprocessOptions& o, std::ostream& err) {
    const PipelineSpec spec = load_pipeline(o.pipeline);
    write_volume(run_pipeline(load_volume(o.in, err), spec), o.out);
}

void do_evaluate(const EvaluateOptions& o, std::ostream& out, std::ostream& err) {
    const BinaryVolume pred = load_volume(o.pred, err);
    const BinaryVolume gt = load_volume(o.gt, err);
    const OverlapCounts c = overlap(gt, pred);
    emit(o.out, format_evaluation_csv(dice(c), iou(c), volume_instances(gt, pred, o.match_iou)), out);
}

void do_crossval(const CrossvalOptions& o, std::ostream& err) {
    const PipelineSpec spec = load_pipeline(o.pipeline);
    const std::vector<std::string> exams = discover_exams(o.dataset);
    if (exams.empty()) {
        throw std::runtime_error("no exams with " + std::string(kGroundTruthManifest) + " and " +
                                 kPredictionManifest + " under '" + o.dataset + "'");
    }
    const FoldAssignment assignment = split_folds(exams, o.folds, o.val, o.seed);

    std::vector<ExamScore> scores(exams.size());
    const unsigned jobs = o.jobs != 0 ? o.jobs : std::max(1U, std::thread::hardware_concurrency());
    parallel_for(exams.size(), jobs, [&](std::size_t i) {
        const fs::path dir = fs::path(o.dataset) / exams[i];
        const BinaryVolume gt = load_manifest_volume(dir / kGroundTruthManifest);
        const BinaryVolume raw = load_manifest_volume(dir / kPredictionManifest);
        if (!same_grid(gt, raw)) {
            throw std::runtime_error("exam '" + exams[i] + "': prediction is " + to_string(raw.dims()) +
                                     " but ground truth is " + to_string(gt.dims()));
        }
        scores[i] = score_exam(exams[i], gt, raw, run_pipeline(raw, spec), o.match_iou);
    });

    const FoldReport report = aggregate(scores, assignment);
    const std::string report_csv = format_report_csv(scores, assignment);
    const std::string summary_csv = format_summary_csv(report);
    const std::string summary_md = format_summary_markdown(report);

    const fs::path out_dir(o.out);
    fs::create_directories(out_dir);
    write_file_atomic(out_dir / "folds.csv", assignment.to_csv());
    write_file_atomic(out_dir / "pipeline.json", to_json(spec) + "\n");
    write_file_atomic(out_dir / "report.csv", report_csv);
    write_file_atomic(out_dir / "summary.csv", summary_csv);
    write_file_atomic(out_dir / "summary.md", summary_md);
    err << "scored " << exams.size() << " exams in " << o.folds << " folds; Dice "
        << format_fixed(report.average.dice_raw.mean, 3) << " -> " << format_fixed(report.average.dice_post.mean, 3)
        << " (" << format_fixed(report.delta_dice_pp, 2) << " pp)\n";
}

void do_histogram(const HistogramOptions& o, std::ostream& out, std::ostream& err) {
    const std::vector<ReportRow> rows = parse_report_csv(read_file(o.report));
    std::vector<double> dice_values;
    std::vector<double> iou_values;
    for (const ReportRow& r : rows) {
        dice_values.push_back(o.variant == "raw" ? r.score.dice_raw : r.score.dice_post);
        iou_values.push_back(o.variant == "raw" ? r.score.iou_raw : r.score.iou_post);
    }
    emit(o.out, format_histogram_csv(histogram(dice_values, o.bin_width), histogram(iou_values, o.bin_width)), out);
    if (o.threshold) {
        err << count_at_or_above(dice_values, *o.threshold) << " of " << dice_values.size()
            << " exams with dice >= " << format_number(*o.threshold) << "; "
            << count_at_or_above(iou_values, *o.threshold) << " with iou >= " << format_number(*o.threshold)
            << "\n";
    }
}

void do_phantom(const PhantomOptions& o) {
    PerturbationSpec perturbation;
    perturbation.speckle_count = o.speckle;
    perturbation.speckle_max_size = o.speckle_size;
    perturbation.hole_count = o.holes;
    perturbation.hole_max_radius = o.hole_radius;
    perturbation.boundary_flip_probability = o.flip_probability;
    perturbation.dropped_slices = o.drop_slices;
    validate(perturbation);

    const int width = std::max(3, static_cast<int>(std::to_string(std::max(0, o.count - 1)).size()));
    Rng master(o.seed);
    const fs::path root(o.out);
    fs::create_directories(root);
    for (int i = 0; i < o.count; ++i) {
        const std::uint64_t phantom_seed = master.next();
        perturbation.seed = master.next();
        std::string id = std::to_string(i);
        id = "exam_" + std::string(static_cast<std::size_t>(width) - std::min<std::size_t>(width, id.size()), '0') + id;
        const BinaryVolume gt = generate_ground_truth(PhantomSpec::sample(phantom_seed, o.in_plane));
        write_exam_volume(root, id, "gt", gt);
        write_exam_volume(root, id, "pred", perturb(gt, perturbation));
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Binary volume post-processing and segmentation scoring toolkit", "binmorph"};
    app.require_subcommand(1);

    AssembleOptions assemble;
    auto* sc_assemble = app.add_subcommand("assemble", "Stack a manifest's slice masks into a BVOL volume");
    sc_assemble->add_option("--manifest", assemble.manifest, "Exam manifest (JSON)")->required();
    sc_assemble->add_option("-o,--out", assemble.out, "Output BVOL path")->required();

    PostprocessOptions post;
    auto* sc_post = app.add_subcommand("postprocess", "Run a morphology pipeline over a BVOL volume");
    sc_post->add_option("-i,--in", post.in, "Input BVOL path")->required();
    sc_post->add_option("--pipeline", post.pipeline, "Pipeline JSON (default: built-in pipeline)");
    sc_post->add_option("-o,--out", post.out, "Output BVOL path")->required();

    EvaluateOptions eval;
    auto* sc_eval = app.add_subcommand("evaluate", "Score a predicted volume against ground truth");
    sc_eval->add_option("--pred", eval.pred, "Predicted BVOL")->required();
    sc_eval->add_option("--gt", eval.gt, "Ground-truth BVOL")->required();
    sc_eval->add_option("--match-iou", eval.match_iou, "IoU needed for a slice-instance match")
        ->check(CLI::Range(0.0, 1.0));
    sc_eval->add_option("-o,--out", eval.out, "Output CSV (default: stdout)");

    CrossvalOptions cv;
    auto* sc_cv = app.add_subcommand("crossval", "Post-process and score a dataset under k-fold cross-validation");
    sc_cv->add_option("--dataset", cv.dataset, "Dataset root directory")->required();
    sc_cv->add_option("--folds", cv.folds, "Number of folds")->capture_default_str();
    sc_cv->add_option("--val", cv.val, "Validation exams per fold")->capture_default_str();
    sc_cv->add_option("--seed", cv.seed, "Shuffle seed")->capture_default_str();
    sc_cv->add_option("--pipeline", cv.pipeline, "Pipeline JSON (default: built-in pipeline)");
    sc_cv->add_option("--match-iou", cv.match_iou, "IoU needed for a slice-instance match")
        ->check(CLI::Range(0.0, 1.0));
    sc_cv->add_option("--jobs", cv.jobs, "Worker threads (0 = all cores)");
    sc_cv->add_option("-o,--out", cv.out, "Output directory")->required();

    HistogramOptions hist;
    auto* sc_hist = app.add_subcommand("histogram", "Bin report scores into a Dice/IoU histogram");
    sc_hist->add_option("--report", hist.report, "report.csv from crossval")->required();
    sc_hist->add_option("--bin-width", hist.bin_width, "Bin width in (0, 1]")->capture_default_str();
    sc_hist->add_option("--variant", hist.variant, "Score columns to bin")
        ->check(CLI::IsMember({"raw", "post"}))
        ->capture_default_str();
    sc_hist->add_option("--threshold", hist.threshold, "Also report how many exams score at or above this value");
    sc_hist->add_option("-o,--out", hist.out, "Output CSV (default: stdout)");

    PhantomOptions ph;
    auto* sc_ph = app.add_subcommand("phantom", "Write a synthetic dataset of phantom exams");
    sc_ph->add_option("--count", ph.count, "Number of exams")->required()->check(CLI::PositiveNumber);
    sc_ph->add_option("--seed", ph.seed, "Master seed")->capture_default_str();
    sc_ph->add_option("--in-plane", ph.in_plane, "Slice width and height")->capture_default_str();
    sc_ph->add_option("--speckle", ph.speckle, "Speckle blobs per prediction")->capture_default_str();
    sc_ph->add_option("--speckle-size", ph.speckle_size, "Max voxels per speckle blob")->capture_default_str();
    sc_ph->add_option("--holes", ph.holes, "Interior holes per prediction")->capture_default_str();
    sc_ph->add_option("--hole-radius", ph.hole_radius, "Max hole radius")->capture_default_str();
    sc_ph->add_option("--flip-prob", ph.flip_probability, "Surface voxel flip probability")->capture_default_str();
    sc_ph->add_option("--drop-slices", ph.drop_slices, "Kidney slices cleared per prediction")->capture_default_str();
    sc_ph->add_option("-o,--out", ph.out, "Output dataset directory")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (sc_assemble->parsed()) do_assemble(assemble);
        if (sc_post->parsed()) do_postprocess(post, err);
        if (sc_eval->parsed()) do_evaluate(eval, out, err);
        if (sc_cv->parsed()) do_crossval(cv, err);
        if (sc_hist->parsed()) do_histogram(hist, out, err);
        if (sc_ph->parsed()) do_phantom(ph);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace binmorph::cli
