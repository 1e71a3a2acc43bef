#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "binmorph/morphology.hpp"

namespace binmorph {

struct DilateStep {
    StructuringElement se = StructuringElement::cross6();
};

struct ErodeStep {
    StructuringElement se = StructuringElement::cross6();
};

struct CleanStep {
    int keep_count = 2;
    std::size_t min_voxels = 64;
    Connectivity connectivity = Connectivity::twentysix;
};

struct MajorityStep {
    int threshold = kDefaultMajorityThreshold;
};

struct FillStep {
    Connectivity connectivity = Connectivity::six;
};

using PipelineStep = std::variant<DilateStep, ErodeStep, CleanStep, MajorityStep, FillStep>;

/// Ordered list of post-processing operations. An empty list is the identity.
struct PipelineSpec {
    std::vector<PipelineStep> steps;

    /// dilate(cross6), erode(cross6), clean(keep 2, min 64, 26-connected),
    /// majority(14), fill(6-connected background).
    static PipelineSpec default_spec();
};

/// Raised for malformed pipeline documents and invalid step parameters.
/// step_index is -1 when the problem is not tied to one step.
class PipelineError : public std::invalid_argument {
public:
    PipelineError(int step_index, const std::string& message);
    int step_index() const { return step_index_; }

private:
    int step_index_;
};

std::string_view op_name(const PipelineStep& step);

/// Throws PipelineError naming the first offending step.
void validate(const PipelineSpec& spec);

/// Parses a JSON array of step objects, e.g.
/// [{"op":"dilate","se":"cross6"},{"op":"clean","keep":2,"min_voxels":64}].
/// Missing parameters take their defaults; unknown keys are rejected. "se"
/// is a built-in name or an array of [dx, dy, dz] offsets.
PipelineSpec parse_pipeline(std::string_view json_text);

/// Canonical JSON form with every parameter spelled out.
std::string to_json(const PipelineSpec& spec);

BinaryVolume apply_step(const BinaryVolume& v, const PipelineStep& step);
BinaryVolume run_pipeline(const BinaryVolume& v, const PipelineSpec& spec);

}  // namespace binmorph
