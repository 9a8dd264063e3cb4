#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pbs/solver.hpp"

namespace pbs {

enum class DiagramKind { Shear, Moment, Deflection };

std::string_view diagram_kind_name(DiagramKind kind) noexcept;

enum class CriticalTag { Max, Min, Zero, Jump };

std::string_view critical_tag_name(CriticalTag tag) noexcept;

struct SamplePoint {
    double x = 0.0;
    double value = 0.0;

    bool operator==(const SamplePoint&) const = default;
};

struct CriticalPoint {
    double x = 0.0;
    double value = 0.0;
    CriticalTag tag = CriticalTag::Max;

    bool operator==(const CriticalPoint&) const = default;
};

// Points are sorted by x; an abscissa appears twice exactly where the
// response jumps (left limit first, then the value at x).
struct DiagramSeries {
    DiagramKind kind = DiagramKind::Shear;
    std::vector<SamplePoint> points;
    std::vector<CriticalPoint> critical_points;
    std::string unit_label;
};

inline constexpr int kDefaultSamples = 1000;

// Unit label for a diagram kind given the beam's unit labels.
std::string diagram_unit(const BeamSolution& s, DiagramKind kind);

// Value of the diagram response at x (deflection divided by EI).
double diagram_value(const BeamSolution& s, DiagramKind kind, double x);
double diagram_left_limit(const BeamSolution& s, DiagramKind kind, double x);

// n uniform samples over [0, L] plus every element position; critical points
// are filled from find_extrema.
DiagramSeries sample_series(const BeamSolution& s, DiagramKind kind, int n = kDefaultSamples);

// Closed-form derivative roots per polynomial piece (bisection above degree
// three), jump abscissas and zero crossings. Exactly one Max and one Min.
std::vector<CriticalPoint> find_extrema(const BeamSolution& s, DiagramKind kind);

// Multiplies every value by factor and relabels the unit; used for the
// presentation-only deflection display conversion.
DiagramSeries rescale_series(DiagramSeries series, double factor, std::string unit_label);

struct SvgOptions {
    int width = 800;
    int height = 320;
    // Deflection is drawn positive-down unless this is cleared.
    bool deflection_down = true;
    std::string length_label = "m";
};

std::string render_svg(const DiagramSeries& series, const SvgOptions& options = {});

std::string serialize_series(const DiagramSeries& series);

// Fixed-format plain-text report: reactions, extrema per diagram, EI note.
std::string summary_text(const BeamSolution& s);

}  // namespace pbs
