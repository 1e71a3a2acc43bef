#include "binmorph/pipeline.hpp"

#include <json.hpp>

namespace binmorph {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_keys(const json& step, int index, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : step.items()) {
        bool known = key == "op";
        for (const char* a : allowed) known = known || key == a;
        if (!known) {
            throw PipelineError(index, "unknown key '" + key + "' for op '" + step.at("op").get<std::string>() + "'");
        }
    }
}

int get_int(const json& step, const char* key, int index, int fallback) {
    if (!step.contains(key)) return fallback;
    const json& v = step.at(key);
    if (!v.is_number_integer()) {
        throw PipelineError(index, std::string("'") + key + "' must be an integer");
    }
    return v.get<int>();
}

Connectivity get_connectivity(const json& step, int index, Connectivity fallback) {
    const int n = get_int(step, "connectivity", index, static_cast<int>(fallback));
    if (n != 6 && n != 26) {
        throw PipelineError(index, "'connectivity' must be 6 or 26, got " + std::to_string(n));
    }
    return connectivity_from_int(n);
}

StructuringElement get_se(const json& step, int index) {
    if (!step.contains("se")) return StructuringElement::cross6();
    const json& v = step.at("se");
    if (v.is_string()) {
        const auto name = v.get<std::string>();
        if (auto se = StructuringElement::builtin(name)) return *se;
        throw PipelineError(index, "unknown structuring element '" + name + "'");
    }
    if (v.is_array()) {
        std::vector<Offset> offsets;
        for (const json& o : v) {
            if (!o.is_array() || o.size() != 3 || !o[0].is_number_integer() || !o[1].is_number_integer() ||
                !o[2].is_number_integer()) {
                throw PipelineError(index, "structuring element offsets must be [dx, dy, dz] integer triples");
            }
            offsets.push_back({o[0].get<int>(), o[1].get<int>(), o[2].get<int>()});
        }
        try {
            return StructuringElement(std::move(offsets));
        } catch (const std::invalid_argument& e) {
            throw PipelineError(index, e.what());
        }
    }
    throw PipelineError(index, "'se' must be a name or an array of offsets");
}

json se_to_json(const StructuringElement& se) {
    if (auto builtin = StructuringElement::builtin(se.name()); builtin && *builtin == se) {
        return se.name();
    }
    json arr = json::array();
    for (const Offset& o : se.offsets()) arr.push_back({o.dx, o.dy, o.dz});
    return arr;
}

}  // namespace

PipelineError::PipelineError(int step_index, const std::string& message)
    : std::invalid_argument(step_index < 0 ? "pipeline: " + message
                                           : "pipeline step " + std::to_string(step_index) + ": " + message),
      step_index_(step_index) {}

PipelineSpec PipelineSpec::default_spec() {
    return PipelineSpec{{DilateStep{}, ErodeStep{}, CleanStep{}, MajorityStep{}, FillStep{}}};
}

std::string_view op_name(const PipelineStep& step) {
    return std::visit(Overloaded{
                          [](const DilateStep&) { return std::string_view("dilate"); },
                          [](const ErodeStep&) { return std::string_view("erode"); },
                          [](const CleanStep&) { return std::string_view("clean"); },
                          [](const MajorityStep&) { return std::string_view("majority"); },
                          [](const FillStep&) { return std::string_view("fill"); },
                      },
                      step);
}

void validate(const PipelineSpec& spec) {
    for (std::size_t i = 0; i < spec.steps.size(); ++i) {
        const int index = static_cast<int>(i);
        std::visit(Overloaded{
                       [](const DilateStep&) {},
                       [](const ErodeStep&) {},
                       [&](const CleanStep& s) {
                           if (s.keep_count < 1) throw PipelineError(index, "clean 'keep' must be positive");
                       },
                       [&](const MajorityStep& s) {
                           if (s.threshold < 1 || s.threshold > 27) {
                               throw PipelineError(index, "majority 'threshold' must lie in [1, 27], got " +
                                                              std::to_string(s.threshold));
                           }
                       },
                       [](const FillStep&) {},
                   },
                   spec.steps[i]);
    }
}

PipelineSpec parse_pipeline(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw PipelineError(-1, std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_array()) {
        throw PipelineError(-1, "document must be a JSON array of step objects");
    }

    PipelineSpec spec;
    int index = 0;
    for (const json& step : doc) {
        if (!step.is_object()) throw PipelineError(index, "step must be an object");
        if (!step.contains("op") || !step.at("op").is_string()) {
            throw PipelineError(index, "missing string field 'op'");
        }
        const auto op = step.at("op").get<std::string>();
        if (op == "dilate" || op == "erode") {
            check_keys(step, index, {"se"});
            if (op == "dilate") {
                spec.steps.emplace_back(DilateStep{get_se(step, index)});
            } else {
                spec.steps.emplace_back(ErodeStep{get_se(step, index)});
            }
        } else if (op == "clean") {
            check_keys(step, index, {"keep", "min_voxels", "connectivity"});
            CleanStep s;
            s.keep_count = get_int(step, "keep", index, s.keep_count);
            const int min_voxels = get_int(step, "min_voxels", index, static_cast<int>(s.min_voxels));
            if (min_voxels < 0) throw PipelineError(index, "clean 'min_voxels' must be non-negative");
            s.min_voxels = static_cast<std::size_t>(min_voxels);
            s.connectivity = get_connectivity(step, index, s.connectivity);
            spec.steps.emplace_back(s);
        } else if (op == "majority") {
            check_keys(step, index, {"threshold"});
            spec.steps.emplace_back(MajorityStep{get_int(step, "threshold", index, kDefaultMajorityThreshold)});
        } else if (op == "fill") {
            check_keys(step, index, {"connectivity"});
            spec.steps.emplace_back(FillStep{get_connectivity(step, index, Connectivity::six)});
        } else {
            throw PipelineError(index, "unknown op '" + op + "'");
        }
        ++index;
    }
    validate(spec);
    return spec;
}

std::string to_json(const PipelineSpec& spec) {
    json doc = json::array();
    for (const PipelineStep& step : spec.steps) {
        json j;
        j["op"] = std::string(op_name(step));
        std::visit(Overloaded{
                       [&](const DilateStep& s) { j["se"] = se_to_json(s.se); },
                       [&](const ErodeStep& s) { j["se"] = se_to_json(s.se); },
                       [&](const CleanStep& s) {
                           j["keep"] = s.keep_count;
                           j["min_voxels"] = s.min_voxels;
                           j["connectivity"] = static_cast<int>(s.connectivity);
                       },
                       [&](const MajorityStep& s) { j["threshold"] = s.threshold; },
                       [&](const FillStep& s) { j["connectivity"] = static_cast<int>(s.connectivity); },
                   },
                   step);
        doc.push_back(std::move(j));
    }
    return doc.dump();
}

BinaryVolume apply_step(const BinaryVolume& v, const PipelineStep& step) {
    return std::visit(Overloaded{
                          [&](const DilateStep& s) { return dilate(v, s.se); },
                          [&](const ErodeStep& s) { return erode(v, s.se); },
                          [&](const CleanStep& s) { return clean(v, s.keep_count, s.min_voxels, s.connectivity); },
                          [&](const MajorityStep& s) { return majority(v, s.threshold); },
                          [&](const FillStep& s) { return fill(v, s.connectivity); },
                      },
                      step);
}

BinaryVolume run_pipeline(const BinaryVolume& v, const PipelineSpec& spec) {
    validate(spec);
    BinaryVolume current = v;
    for (const PipelineStep& step : spec.steps) {
        current = apply_step(current, step);
    }
    return current;
}

}  // namespace binmorph
