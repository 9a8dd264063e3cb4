#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pbs/error.hpp"

namespace pbs {

// External sign convention used by every document:
//   loads positive downward, applied moments positive counter-clockwise,
//   reactions reported positive upward (fixed-end moments positive CCW).

enum class SupportKind { Simple, Roller, Fixed };

std::string_view support_kind_name(SupportKind kind) noexcept;
std::optional<SupportKind> parse_support_kind(std::string_view name) noexcept;

struct Support {
    SupportKind kind = SupportKind::Simple;
    double position = 0.0;

    bool operator==(const Support&) const = default;
};

struct PointLoad {
    double magnitude = 0.0;  // positive = downward
    double position = 0.0;

    bool operator==(const PointLoad&) const = default;
};

// Linearly varying intensity between start and end.
struct DistributedLoad {
    double start = 0.0;
    double end = 0.0;
    double start_intensity = 0.0;  // positive = downward
    double end_intensity = 0.0;

    bool operator==(const DistributedLoad&) const = default;
};

struct AppliedMoment {
    double magnitude = 0.0;  // positive = counter-clockwise
    double position = 0.0;

    bool operator==(const AppliedMoment&) const = default;
};

struct SectionProperties {
    std::optional<double> youngs_modulus;
    std::optional<double> second_moment;

    bool empty() const noexcept { return !youngs_modulus && !second_moment; }
    // E*I when both are present.
    std::optional<double> flexural_rigidity() const noexcept;

    bool operator==(const SectionProperties&) const = default;
};

// Free-text labels carried as metadata; no conversion is ever applied.
struct UnitLabels {
    std::string length = "m";
    std::string force = "kN";

    bool operator==(const UnitLabels&) const = default;
};

struct BeamSpec {
    double length = 0.0;
    UnitLabels units;
    std::vector<Support> supports;
    std::vector<PointLoad> point_loads;
    std::vector<DistributedLoad> distributed_loads;
    std::vector<AppliedMoment> moments;
    SectionProperties section;

    bool operator==(const BeamSpec&) const = default;
};

struct ValidationIssue {
    ErrorCode code;
    std::string path;
    std::string message;

    bool operator==(const ValidationIssue&) const = default;
};

struct ValidationOutcome;

// Witness that a BeamSpec satisfied every invariant. Only validate_beam can
// construct one, so anything typed ValidatedBeam has passed the gate.
class ValidatedBeam {
public:
    const BeamSpec& spec() const noexcept { return spec_; }
    double length() const noexcept { return spec_.length; }

private:
    explicit ValidatedBeam(BeamSpec spec) : spec_(std::move(spec)) {}
    friend ValidationOutcome validate_beam(const BeamSpec& spec);

    BeamSpec spec_;
};

struct ValidationOutcome {
    std::optional<ValidatedBeam> beam;
    std::vector<ValidationIssue> errors;

    bool ok() const noexcept { return beam.has_value(); }
};

// Total: never throws on any parsed spec. Reports every violated invariant.
ValidationOutcome validate_beam(const BeamSpec& spec);

// Convenience for callers that want an exception: throws pbs::Error carrying
// the first issue's code, with all issues listed in the detail.
ValidatedBeam require_valid(const BeamSpec& spec);

std::string describe_issues(const std::vector<ValidationIssue>& issues);

// Canonical JSON document: fixed key order, shortest round-trip number
// formatting, no trailing newline. The section block is omitted when empty.
std::string serialize_beam(const BeamSpec& spec);

// Strict parse: unknown keys are rejected with their path. Range checks are
// left to validate_beam.
BeamSpec deserialize_beam(std::string_view text);

// JSON Schema (draft 2020-12) for the BeamSpec document.
const std::string& beam_schema();

}  // namespace pbs
