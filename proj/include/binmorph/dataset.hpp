#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "binmorph/volume.hpp"

namespace binmorph {

/// Per-exam slice list, stored as JSON:
///   {"exam_id": "...", "spacing_mm": [sx, sy, sz],
///    "slices": [{"index": 0, "path": "gt/slice_000.pgm"}, ...]}
/// Paths are relative to the manifest's directory.
struct DatasetManifest {
    struct Entry {
        int index = 0;
        std::string path;
    };

    std::string exam_id;
    Spacing spacing_mm{1.0, 1.0, 1.0};
    std::vector<Entry> slices;
};

/// Parses and checks that indices run 0..n-1 ascending.
DatasetManifest parse_manifest(const std::string& json_text);
std::string to_json(const DatasetManifest& manifest);

DatasetManifest read_manifest(const std::filesystem::path& path);

/// Reads every slice listed in the manifest and stacks them.
BinaryVolume load_manifest_volume(const std::filesystem::path& manifest_path);

inline constexpr const char* kGroundTruthManifest = "gt.manifest.json";
inline constexpr const char* kPredictionManifest = "pred.manifest.json";

/// Dataset layout: <root>/<exam_id>/{gt,pred}.manifest.json with slices under
/// <root>/<exam_id>/{gt,pred}/slice_NNN.pgm. `kind` is "gt" or "pred".
void write_exam_volume(const std::filesystem::path& root, const std::string& exam_id, const std::string& kind,
                       const BinaryVolume& volume);

/// Exam directories under `root` holding both manifests, sorted.
std::vector<std::string> discover_exams(const std::filesystem::path& root);

}  // namespace binmorph
