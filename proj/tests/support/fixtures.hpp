#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pbs/beam.hpp"
#include "pbs/detections.hpp"

namespace pbs::testing {

BeamSpec make_spec(double length, std::vector<Support> supports, std::vector<PointLoad> point_loads = {},
                   std::vector<DistributedLoad> distributed_loads = {}, std::vector<AppliedMoment> moments = {});

// Euler-Bernoulli direct stiffness model with Hermite elements between every
// load and support position. Nodal values are exact for polynomial loads of
// degree <= 1, so it serves as an independent reference for the Macaulay
// solver (reactions and EI*y at the nodes).
struct StiffnessResult {
    std::vector<double> forces;                 // per support, upward positive
    std::vector<std::optional<double>> moments; // per support, CCW positive
    std::vector<double> node_x;
    std::vector<double> node_ei_deflection;
    std::vector<double> node_ei_slope;
};
StiffnessResult stiffness_oracle(const BeamSpec& spec);

// Random stable beam covering overhangs, interior supports, cantilevers,
// fixed-fixed spans, linear distributed loads and applied moments.
BeamSpec random_beam(std::mt19937_64& rng);

// Random beam restricted to what a drawing can express: grid positions,
// elements at both ends, uniform distributed loads, distinct load positions.
BeamSpec random_drawable_beam(std::mt19937_64& rng);

// Renders a spec into the detector file a perfect detector would produce.
// With segment_chain set, every gap between consecutive element positions
// carries its own length annotation instead of one total span annotation.
DetectionSet render_detections(const BeamSpec& spec, bool segment_chain = false);

// Number formatted the way a person would write it on the drawing.
std::string shortest(double v);

std::string read_text(const std::filesystem::path& p);
void write_text(const std::filesystem::path& p, const std::string& text);

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace pbs::testing
