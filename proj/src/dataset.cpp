#include "binmorph/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "binmorph/io.hpp"

namespace binmorph {

namespace fs = std::filesystem;
using nlohmann::json;

DatasetManifest parse_manifest(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("manifest: malformed JSON: ") + e.what());
    }
    try {
        DatasetManifest m;
        m.exam_id = doc.at("exam_id").get<std::string>();
        const json& spacing = doc.at("spacing_mm");
        if (!spacing.is_array() || spacing.size() != 3) {
            throw FormatError("manifest: 'spacing_mm' must be an array of three numbers");
        }
        for (int i = 0; i < 3; ++i) m.spacing_mm[i] = spacing.at(i).get<double>();
        const json& slices = doc.at("slices");
        if (!slices.is_array()) throw FormatError("manifest: 'slices' must be an array");
        for (const json& s : slices) {
            m.slices.push_back({s.at("index").get<int>(), s.at("path").get<std::string>()});
        }
        if (m.slices.empty()) throw FormatError("manifest: no slices listed");
        for (std::size_t i = 0; i < m.slices.size(); ++i) {
            if (m.slices[i].index != static_cast<int>(i)) {
                throw FormatError("manifest '" + m.exam_id + "': slice entry " + std::to_string(i) + " has index " +
                                  std::to_string(m.slices[i].index) + "; indices must run 0..n-1 ascending");
            }
        }
        return m;
    } catch (const json::exception& e) {
        throw FormatError(std::string("manifest: ") + e.what());
    }
}

std::string to_json(const DatasetManifest& manifest) {
    json doc;
    doc["exam_id"] = manifest.exam_id;
    doc["spacing_mm"] = manifest.spacing_mm;
    json slices = json::array();
    for (const auto& s : manifest.slices) slices.push_back({{"index", s.index}, {"path", s.path}});
    doc["slices"] = std::move(slices);
    return doc.dump(2) + "\n";
}

DatasetManifest read_manifest(const fs::path& path) {
    try {
        return parse_manifest(read_file(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

BinaryVolume load_manifest_volume(const fs::path& manifest_path) {
    const DatasetManifest m = read_manifest(manifest_path);
    const fs::path base = manifest_path.parent_path();
    std::vector<SliceMask> slices;
    slices.reserve(m.slices.size());
    for (const auto& entry : m.slices) {
        SliceMask s = read_slice_mask(base / entry.path);
        s.exam_id = m.exam_id;
        s.slice_index = entry.index;
        slices.push_back(std::move(s));
    }
    return assemble_volume(slices, m.spacing_mm);
}

void write_exam_volume(const fs::path& root, const std::string& exam_id, const std::string& kind,
                       const BinaryVolume& volume) {
    if (kind != "gt" && kind != "pred") {
        throw std::invalid_argument("dataset: volume kind must be 'gt' or 'pred', got '" + kind + "'");
    }
    if (exam_id.empty() || exam_id.find_first_of("/\\") != std::string::npos || exam_id == "." || exam_id == "..") {
        throw std::invalid_argument("dataset: invalid exam id '" + exam_id + "'");
    }
    const fs::path exam_dir = root / exam_id;
    fs::create_directories(exam_dir / kind);
    DatasetManifest m;
    m.exam_id = exam_id;
    m.spacing_mm = volume.spacing();
    for (int z = 0; z < volume.nz(); ++z) {
        char name[32];
        std::snprintf(name, sizeof name, "slice_%03d.pgm", z);
        const std::string rel = kind + "/" + name;
        write_slice_mask(extract_slice(volume, z, exam_id), exam_dir / rel);
        m.slices.push_back({z, rel});
    }
    write_file_atomic(exam_dir / (kind + ".manifest.json"), to_json(m));
}

std::vector<std::string> discover_exams(const fs::path& root) {
    if (!fs::is_directory(root)) {
        throw std::runtime_error("dataset root '" + root.string() + "' is not a directory");
    }
    std::vector<std::string> out;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (!entry.is_directory()) continue;
        if (fs::exists(entry.path() / kGroundTruthManifest) && fs::exists(entry.path() / kPredictionManifest)) {
            out.push_back(entry.path().filename().string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace binmorph
