#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pbs/beam.hpp"
#include "pbs/detections.hpp"
#include "pbs/quantity.hpp"

namespace pbs {

struct BeamAxis {
    double y_level = 0.0;
    double x_min = 0.0;
    double x_max = 1.0;
};

// Axis level is the median top edge of the support boxes; the horizontal
// extent is the span of element anchors (support/load centers, distributed
// load edges). Throws NoSupports.
BeamAxis infer_beam_axis(const DetectionSet& ds);
BeamAxis infer_beam_axis(const std::vector<Detection>& detections);

struct Projection {
    double t = 0.0;
    // Distributed loads only: [t_start, t_end] from the box edges.
    std::optional<std::pair<double, double>> extent;
};

// Throws DegenerateAxis when the axis has no horizontal extent.
Projection project_to_axis(const Detection& d, const BeamAxis& axis);

enum class ScaleMode { TotalSpan, SegmentChain, UnitFallback };

std::string_view scale_mode_name(ScaleMode mode) noexcept;

// Maps normalized axis positions t to physical positions. For a segment chain
// the map is piecewise linear through the recomputed element positions.
struct ScaleResolution {
    double span = 1.0;
    double scale = 1.0;  // physical length per unit t (span / 1.0)
    ScaleMode mode = ScaleMode::UnitFallback;
    std::vector<std::pair<double, double>> breakpoints;  // (t, x), sorted by t
    std::vector<std::string> warnings;
    std::string length_label;

    double position_of(double t) const;
};

struct ParsedAnnotation {
    std::size_t index = 0;  // into DetectionSet::annotations
    BBox bbox;
    Quantity quantity;
};

ScaleResolution resolve_scale(const std::vector<ParsedAnnotation>& lengths, const BeamAxis& axis,
                              std::vector<double> element_ts);

// A load-like element awaiting a magnitude.
struct AssociationElement {
    DetectionClass klass = DetectionClass::PointLoad;
    BBox bbox;
};

struct Assignment {
    // per element: index into the annotation list, or nullopt
    std::vector<std::optional<std::size_t>> element_to_annotation;
    std::vector<std::size_t> unmatched_annotations;
};

// Greedy nearest-pair matching over kind-compatible pairs (force<->pload,
// intensity<->dload, moment<->moment) by bbox-center distance in pixels.
Assignment associate_annotations(const std::vector<AssociationElement>& elements,
                                 const std::vector<ParsedAnnotation>& annotations, const ImageSize& image);

struct InferenceOptions {
    double confidence_threshold = kDefaultConfidenceThreshold;
    double iou_threshold = kDefaultIouThreshold;
    double review_confidence = kReviewConfidence;
    SectionProperties section;
};

struct InferenceReport {
    BeamSpec spec;
    std::vector<std::string> warnings;
    std::vector<std::string> needs_review;

    // True when any warning starts with "fatal:".
    bool fatal() const;
};

// Full detection -> BeamSpec pipeline. Throws NoSupports / DegenerateAxis;
// every other problem is reported through warnings and review flags.
InferenceReport build_beam_spec(const DetectionSet& ds, const InferenceOptions& options = {});

std::string serialize_report(const InferenceReport& report);

// Rounds an inferred coordinate to 10 significant digits, snapping values
// below 1e-9 * span to zero.
double canonical_round(double value, double span);

}  // namespace pbs
