#include <doctest.h>

#include <sstream>

#include "binmorph/cli.hpp"
#include "binmorph/dataset.hpp"
#include "binmorph/io.hpp"
#include "binmorph/pipeline.hpp"
#include "binmorph/report.hpp"
#include "test_support.hpp"

using namespace binmorph;
using namespace binmorph::testing;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string p(const fs::path& path) {
    return path.string();
}

}  // namespace

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    const Result r = run_cli({"evaluate", "--pred", "a.bvol", "--gt", "b.bvol", "--bogus"});
    CHECK(r.code == 2);
    CHECK(r.err.find("bogus") != std::string::npos);
    CHECK(run_cli({"evaluate", "--pred", "a.bvol"}).code == 2);
    CHECK(run_cli({"crossval", "--dataset", "d", "-o", "r", "--folds", "many"}).code == 2);
    CHECK(run_cli({"phantom", "--count", "0", "-o", "x"}).code == 2);
}

TEST_CASE("help exits 0") {
    const Result r = run_cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("crossval") != std::string::npos);
    CHECK(run_cli({"postprocess", "--help"}).code == 0);
}

TEST_CASE("runtime errors exit 1") {
    const auto dir = scratch_dir("cli_errors");
    const Result r = run_cli({"evaluate", "--pred", p(dir / "missing.bvol"), "--gt", p(dir / "missing.bvol")});
    CHECK(r.code == 1);
    CHECK(r.err.find("missing.bvol") != std::string::npos);
    write_file_atomic(dir / "bad.json", R"([{"op":"dilate"},{"op":"shrink"}])");
    write_volume(BinaryVolume(Dims{3, 3, 3}), dir / "v.bvol");
    const Result bad_pipeline =
        run_cli({"postprocess", "-i", p(dir / "v.bvol"), "--pipeline", p(dir / "bad.json"), "-o", p(dir / "o.bvol")});
    CHECK(bad_pipeline.code == 1);
    CHECK(bad_pipeline.err.find("step 1") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "o.bvol"));
    CHECK(run_cli({"crossval", "--dataset", p(dir / "nothing"), "-o", p(dir / "r")}).code == 1);
}

TEST_CASE("evaluate a volume against itself") {
    const auto dir = scratch_dir("cli_evaluate");
    BinaryVolume v(Dims{8, 8, 3});
    set_box(v, {1, 1, 0}, {3, 3, 2});
    set_box(v, {5, 5, 1}, {6, 6, 1});
    write_volume(v, dir / "x.bvol");
    const Result r = run_cli({"evaluate", "--pred", p(dir / "x.bvol"), "--gt", p(dir / "x.bvol")});
    CHECK(r.code == 0);
    CHECK(r.out == "dice,iou,tp,fp,fn\n1.0,1.0,4,0,0\n");
    CHECK(run_cli({"evaluate", "--pred", p(dir / "x.bvol"), "--gt", p(dir / "x.bvol"), "-o", p(dir / "e.csv")}).code ==
          0);
    CHECK(read_file(dir / "e.csv") == r.out);
}

TEST_CASE("postprocess with an empty pipeline copies the volume") {
    const auto dir = scratch_dir("cli_post");
    Rng rng(3);
    write_volume(random_volume(rng, Dims{13, 7, 5}, 0.4), dir / "in.bvol");
    write_file_atomic(dir / "empty.json", "[]");
    const Result r =
        run_cli({"postprocess", "-i", p(dir / "in.bvol"), "--pipeline", p(dir / "empty.json"), "-o", p(dir / "out.bvol")});
    CHECK(r.code == 0);
    CHECK(read_file(dir / "out.bvol") == read_file(dir / "in.bvol"));

    CHECK(run_cli({"postprocess", "-i", p(dir / "in.bvol"), "-o", p(dir / "def.bvol")}).code == 0);
    CHECK(read_volume(dir / "def.bvol") ==
          run_pipeline(read_volume(dir / "in.bvol"), PipelineSpec::default_spec()));
}

TEST_CASE("assemble a manifest") {
    const auto dir = scratch_dir("cli_assemble");
    Rng rng(4);
    const BinaryVolume v = unite(BinaryVolume(Dims{9, 6, 4}, {0.5, 0.5, 3.0}), random_volume(rng, Dims{9, 6, 4}, 0.5));
    write_exam_volume(dir, "exam_x", "gt", v);
    const Result r = run_cli({"assemble", "--manifest", p(dir / "exam_x" / kGroundTruthManifest), "-o", p(dir / "x.bvol")});
    CHECK(r.code == 0);
    CHECK(read_volume(dir / "x.bvol") == v);
}

TEST_CASE("phantom then crossval is deterministic") {
    const auto dir = scratch_dir("cli_crossval");
    const std::string data = p(dir / "d");
    REQUIRE(run_cli({"phantom", "--count", "6", "--seed", "7", "--in-plane", "64", "-o", data}).code == 0);
    CHECK(discover_exams(data) ==
          std::vector<std::string>{"exam_000", "exam_001", "exam_002", "exam_003", "exam_004", "exam_005"});

    const Result first = run_cli({"crossval", "--dataset", data, "--folds", "3", "--val", "1", "--seed", "17", "-o",
                                  p(dir / "r1"), "--jobs", "4"});
    REQUIRE(first.code == 0);
    const Result second = run_cli({"crossval", "--dataset", data, "--folds", "3", "--val", "1", "--seed", "17", "-o",
                                   p(dir / "r2"), "--jobs", "1"});
    REQUIRE(second.code == 0);
    for (const char* name : {"folds.csv", "pipeline.json", "report.csv", "summary.csv", "summary.md"}) {
        CHECK(read_file(dir / "r1" / name) == read_file(dir / "r2" / name));
    }
    const auto rows = parse_report_csv(read_file(dir / "r1" / "report.csv"));
    REQUIRE(rows.size() == 6);
    for (const ReportRow& row : rows) {
        CHECK(row.fold >= 1);
        CHECK(row.fold <= 3);
        CHECK(row.score.dice_post > row.score.dice_raw);
    }
    const std::string summary = read_file(dir / "r1" / "summary.csv");
    CHECK(summary.rfind("method,metric,fold_1,fold_2,fold_3,average,mean_of_folds\n", 0) == 0);

    // Regenerating the dataset reproduces it byte for byte.
    REQUIRE(run_cli({"phantom", "--count", "6", "--seed", "7", "--in-plane", "64", "-o", p(dir / "d2")}).code == 0);
    for (const auto& entry : fs::recursive_directory_iterator(data)) {
        if (!entry.is_regular_file()) continue;
        const fs::path rel = fs::relative(entry.path(), data);
        CHECK(read_file(entry.path()) == read_file(dir / "d2" / rel));
    }

    const Result hist = run_cli({"histogram", "--report", p(dir / "r1" / "report.csv"), "--bin-width", "0.5",
                                 "--threshold", "0.0"});
    CHECK(hist.code == 0);
    CHECK(hist.out.rfind("bin_lo,bin_hi,count_dice,count_iou\n0.0,0.5,", 0) == 0);
    CHECK(hist.err.find("6 of 6 exams with dice >= 0.0") != std::string::npos);
}

TEST_CASE("three exams cannot fill three folds with a validation exam") {
    const auto dir = scratch_dir("cli_three");
    REQUIRE(run_cli({"phantom", "--count", "3", "--seed", "7", "--in-plane", "48", "-o", p(dir / "d")}).code == 0);
    const Result r =
        run_cli({"crossval", "--dataset", p(dir / "d"), "--folds", "3", "--val", "1", "--seed", "17", "-o", p(dir / "r")});
    CHECK(r.code == 1);
    CHECK(r.err.find("error:") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "r" / "report.csv"));
}
