#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pbs/beam.hpp"
#include "pbs/singularity.hpp"

namespace pbs {

enum class UnknownKind { ReactionForce, ReactionMoment, SlopeConstant, DeflectionConstant };

struct Unknown {
    UnknownKind kind = UnknownKind::ReactionForce;
    std::size_t support = 0;  // meaningful for the reaction kinds

    bool operator==(const Unknown&) const = default;
};

std::string unknown_label(const Unknown& u);

// Load intensity q(x) in the internal convention (upward force and CCW
// moment positive, x from the left end), with reactions left symbolic.
// Unknown order: one force per support, then one moment per fixed support
// (in support order), then C1, C2.
struct LoadFunction {
    std::vector<Unknown> unknowns;
    std::vector<SingularityTerm> terms;
};

LoadFunction assemble_load_function(const ValidatedBeam& beam);

// Dense square system A u = b over the unknowns of the load function.
struct LinearSystem {
    std::vector<Unknown> unknowns;
    std::vector<std::vector<double>> matrix;
    std::vector<double> rhs;
    std::vector<std::string> row_labels;

    std::size_t size() const noexcept { return rhs.size(); }
};

// Rows: vertical equilibrium, moment equilibrium about x = 0, EI*y(a) = 0 per
// support, EI*theta(a) = 0 per fixed support.
LinearSystem assemble_system(const ValidatedBeam& beam);

// Gaussian elimination with partial pivoting on the row-equilibrated system.
// A pivot below 1e-12 * ||A||_inf raises SingularSystem.
std::vector<double> solve_linear_system(const LinearSystem& system);

struct Reaction {
    std::size_t support = 0;
    double force = 0.0;                 // upward positive
    std::optional<double> moment;       // CCW positive, fixed supports only
};

struct BeamSolution {
    BeamSpec spec;
    std::vector<Reaction> reactions;
    double c1 = 0.0;
    double c2 = 0.0;
    double ei = 1.0;
    bool ei_normalized = true;

    std::vector<SingularityTerm> load;        // q
    std::vector<SingularityTerm> shear;       // V
    std::vector<SingularityTerm> moment;      // M
    std::vector<SingularityTerm> ei_slope;    // EI*theta
    std::vector<SingularityTerm> ei_deflection;  // EI*y

    double length() const noexcept { return spec.length; }
};

// Flexural rigidity resolution: explicit override, else E*I from the section,
// else 1 with ei_normalized set.
BeamSolution solve_beam(const ValidatedBeam& beam, std::optional<double> ei_override = std::nullopt);

double shear_at(const BeamSolution& s, double x);
double moment_at(const BeamSolution& s, double x);
double slope_at(const BeamSolution& s, double x);
double deflection_at(const BeamSolution& s, double x);

// Canonical JSON export of a solution (reactions, constants, EI, term lists).
std::string serialize_solution(const BeamSolution& s);

}  // namespace pbs
