#include "pbs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <tuple>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "pbs/error.hpp"

namespace pbs {

namespace {

constexpr double kMinAxisExtent = 1e-6;
constexpr double kSameT = 1e-9;

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string path_of(std::string_view list, std::size_t i) {
    return fmt::format("{}[{}]", list, i);
}

SupportKind support_kind_of(DetectionClass k) {
    switch (k) {
        case DetectionClass::Fixed: return SupportKind::Fixed;
        case DetectionClass::Roller: return SupportKind::Roller;
        default: return SupportKind::Simple;
    }
}

bool compatible(DetectionClass k, QuantityKind q) {
    return (k == DetectionClass::PointLoad && q == QuantityKind::Force) ||
           (k == DetectionClass::DistributedLoad && q == QuantityKind::DistributedIntensity) ||
           (k == DetectionClass::Moment && q == QuantityKind::Moment);
}

}  // namespace

BeamAxis infer_beam_axis(const std::vector<Detection>& detections) {
    std::vector<double> tops;
    double lo = 1.0, hi = 0.0;
    for (const auto& d : detections) {
        if (is_support(d.klass)) {
            tops.push_back(d.bbox.top());
        }
        if (d.klass == DetectionClass::DistributedLoad) {
            lo = std::min(lo, d.bbox.left());
            hi = std::max(hi, d.bbox.right());
        } else {
            lo = std::min(lo, d.bbox.cx);
            hi = std::max(hi, d.bbox.cx);
        }
    }
    if (tops.empty()) {
        throw Error(ErrorCode::NoSupports, "no support detections: the beam has no boundary conditions");
    }
    BeamAxis axis;
    axis.y_level = std::clamp(median(std::move(tops)), 0.0, 1.0);
    axis.x_min = std::clamp(lo, 0.0, 1.0);
    axis.x_max = std::clamp(hi, 0.0, 1.0);
    return axis;
}

BeamAxis infer_beam_axis(const DetectionSet& ds) {
    return infer_beam_axis(ds.detections);
}

Projection project_to_axis(const Detection& d, const BeamAxis& axis) {
    const double range = axis.x_max - axis.x_min;
    if (!(range >= kMinAxisExtent)) {
        throw Error(ErrorCode::DegenerateAxis, "detections span no horizontal extent");
    }
    auto to_t = [&](double x) { return std::clamp((x - axis.x_min) / range, 0.0, 1.0); };
    Projection p;
    p.t = to_t(d.bbox.cx);
    if (d.klass == DetectionClass::DistributedLoad) {
        p.extent = std::make_pair(to_t(d.bbox.left()), to_t(d.bbox.right()));
    }
    return p;
}

std::string_view scale_mode_name(ScaleMode mode) noexcept {
    switch (mode) {
        case ScaleMode::TotalSpan: return "total_span";
        case ScaleMode::SegmentChain: return "segment_chain";
        case ScaleMode::UnitFallback: return "unit_fallback";
    }
    return "unit_fallback";
}

double ScaleResolution::position_of(double t) const {
    if (breakpoints.empty()) return t * scale;
    if (t <= breakpoints.front().first) return breakpoints.front().second;
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        const auto [t0, x0] = breakpoints[i - 1];
        const auto [t1, x1] = breakpoints[i];
        if (t == t1) return x1;
        if (t < t1) return x0 + (t - t0) / (t1 - t0) * (x1 - x0);
    }
    return breakpoints.back().second;
}

ScaleResolution resolve_scale(const std::vector<ParsedAnnotation>& lengths, const BeamAxis& /*axis*/,
                              std::vector<double> element_ts) {
    ScaleResolution res;
    std::vector<ParsedAnnotation> usable;
    for (const auto& a : lengths) {
        if (a.quantity.value > 0.0) {
            usable.push_back(a);
        } else {
            res.warnings.push_back(fmt::format("length annotation {} {} is not positive and was ignored",
                                               a.quantity.value, a.quantity.unit_label));
        }
    }
    if (!usable.empty()) {
        res.length_label = usable.front().quantity.unit_label;
    }

    auto total_span = [&](double span) {
        res.mode = ScaleMode::TotalSpan;
        res.span = span;
        res.scale = span / 1.0;
        res.breakpoints = {{0.0, 0.0}, {1.0, span}};
    };

    if (usable.empty()) {
        res.mode = ScaleMode::UnitFallback;
        res.span = 1.0;
        res.scale = 1.0;
        res.breakpoints = {{0.0, 0.0}, {1.0, 1.0}};
        res.warnings.push_back("fatal: span unresolved — unit span assumed");
        return res;
    }
    if (usable.size() == 1) {
        total_span(usable.front().quantity.value);
        return res;
    }

    std::sort(element_ts.begin(), element_ts.end());
    std::vector<double> ts;
    for (double t : element_ts) {
        if (ts.empty() || t - ts.back() > kSameT) ts.push_back(t);
    }
    const std::size_t k = usable.size();
    const std::size_t gap_count = ts.size() > 1 ? ts.size() - 1 : 0;
    if (gap_count < k) {
        auto largest = std::max_element(usable.begin(), usable.end(), [](const auto& a, const auto& b) {
            return a.quantity.value < b.quantity.value;
        });
        res.warnings.push_back(fmt::format(
            "{} length annotations but only {} gaps between elements; the largest ({} {}) is used as the total span",
            k, gap_count, largest->quantity.value, largest->quantity.unit_label));
        total_span(largest->quantity.value);
        return res;
    }

    std::vector<std::size_t> order(gap_count);
    std::iota(order.begin(), order.end(), 0);
    // Widths are compared on a 1e-9 grid so that gaps drawn equal stay tied
    // (and fall back to left-to-right order) regardless of roundoff.
    auto width_key = [&](std::size_t g) { return std::llround((ts[g + 1] - ts[g]) / kSameT); };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return width_key(a) > width_key(b); });
    std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(chosen.begin(), chosen.end());
    std::sort(usable.begin(), usable.end(), [](const auto& a, const auto& b) {
        return std::tie(a.bbox.cx, a.bbox.cy, a.index) < std::tie(b.bbox.cx, b.bbox.cy, b.index);
    });

    std::vector<std::optional<double>> gap_length(gap_count);
    double annotated_t = 0.0, annotated_len = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        gap_length[chosen[i]] = usable[i].quantity.value;
        annotated_t += ts[chosen[i] + 1] - ts[chosen[i]];
        annotated_len += usable[i].quantity.value;
    }
    const double unannotated_scale = annotated_len / annotated_t;
    if (k < gap_count) {
        res.warnings.push_back(fmt::format("{} of {} segments carry no dimension; scaled proportionally",
                                           gap_count - k, gap_count));
    }

    res.mode = ScaleMode::SegmentChain;
    res.breakpoints.push_back({ts.front(), 0.0});
    double x = 0.0;
    for (std::size_t g = 0; g < gap_count; ++g) {
        x += gap_length[g] ? *gap_length[g] : (ts[g + 1] - ts[g]) * unannotated_scale;
        res.breakpoints.push_back({ts[g + 1], x});
    }
    res.span = x;
    res.scale = x / 1.0;
    return res;
}

Assignment associate_annotations(const std::vector<AssociationElement>& elements,
                                 const std::vector<ParsedAnnotation>& annotations, const ImageSize& image) {
    struct Pair {
        double distance;
        std::size_t element;
        std::size_t annotation;
    };
    std::vector<Pair> pairs;
    const double W = static_cast<double>(image.width);
    const double H = static_cast<double>(image.height);
    for (std::size_t e = 0; e < elements.size(); ++e) {
        for (std::size_t a = 0; a < annotations.size(); ++a) {
            if (!compatible(elements[e].klass, annotations[a].quantity.kind)) continue;
            const double dx = (elements[e].bbox.cx - annotations[a].bbox.cx) * W;
            const double dy = (elements[e].bbox.cy - annotations[a].bbox.cy) * H;
            pairs.push_back({std::hypot(dx, dy), e, a});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
        return std::tie(x.distance, x.element, x.annotation) < std::tie(y.distance, y.element, y.annotation);
    });

    Assignment out;
    out.element_to_annotation.assign(elements.size(), std::nullopt);
    std::vector<bool> used(annotations.size(), false);
    for (const Pair& p : pairs) {
        if (out.element_to_annotation[p.element] || used[p.annotation]) continue;
        out.element_to_annotation[p.element] = p.annotation;
        used[p.annotation] = true;
    }
    for (std::size_t a = 0; a < annotations.size(); ++a) {
        if (!used[a]) out.unmatched_annotations.push_back(a);
    }
    return out;
}

bool InferenceReport::fatal() const {
    return std::any_of(warnings.begin(), warnings.end(), [](const std::string& w) { return w.rfind("fatal:", 0) == 0; });
}

double canonical_round(double value, double span) {
    if (std::abs(value) < 1e-9 * std::abs(span)) {
        return 0.0;
    }
    return std::strtod(fmt::format("{:.10g}", value).c_str(), nullptr);
}

InferenceReport build_beam_spec(const DetectionSet& ds, const InferenceOptions& options) {
    InferenceReport report;
    const std::vector<Detection> kept = nms(ds.detections, options.iou_threshold, options.confidence_threshold);
    if (kept.empty()) {
        throw Error(ErrorCode::NoSupports, "no detections above confidence threshold");
    }
    const BeamAxis axis = infer_beam_axis(kept);

    std::vector<Projection> proj;
    std::vector<double> ts;
    for (const auto& d : kept) {
        Projection p = project_to_axis(d, axis);
        if (p.extent) {
            ts.push_back(p.extent->first);
            ts.push_back(p.extent->second);
        } else {
            ts.push_back(p.t);
        }
        proj.push_back(p);
    }

    std::vector<ParsedAnnotation> lengths, values;
    for (std::size_t i = 0; i < ds.annotations.size(); ++i) {
        const auto& a = ds.annotations[i];
        try {
            ParsedAnnotation pa{i, a.bbox, parse_annotation_text(a.text)};
            (pa.quantity.kind == QuantityKind::Length ? lengths : values).push_back(std::move(pa));
        } catch (const Error& e) {
            report.warnings.push_back(fmt::format("annotation '{}' ignored: {}", a.text, e.what()));
        }
    }

    ScaleResolution scale = resolve_scale(lengths, axis, ts);
    report.warnings.insert(report.warnings.end(), scale.warnings.begin(), scale.warnings.end());
    const double span = canonical_round(scale.span, scale.span);
    auto place = [&](double t) { return std::clamp(canonical_round(scale.position_of(t), span), 0.0, span); };

    std::vector<AssociationElement> load_elements;
    std::vector<std::size_t> load_detection;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (!is_support(kept[i].klass)) {
            load_elements.push_back({kept[i].klass, kept[i].bbox});
            load_detection.push_back(i);
        }
    }
    const Assignment assignment = associate_annotations(load_elements, values, ds.image);
    for (std::size_t a : assignment.unmatched_annotations) {
        report.warnings.push_back(
            fmt::format("annotation '{}' is not associated with any element", ds.annotations[values[a].index].text));
    }

    std::vector<std::optional<std::size_t>> annotation_of(kept.size());
    for (std::size_t e = 0; e < load_elements.size(); ++e) {
        annotation_of[load_detection[e]] = assignment.element_to_annotation[e];
    }

    std::vector<std::pair<Support, bool>> supports;
    std::vector<std::pair<PointLoad, bool>> ploads;
    std::vector<std::pair<DistributedLoad, bool>> dloads;
    std::vector<std::pair<AppliedMoment, bool>> moments;
    std::string force_label;

    for (std::size_t i = 0; i < kept.size(); ++i) {
        const Detection& d = kept[i];
        bool review = d.confidence < options.review_confidence;
        std::optional<double> magnitude;
        if (annotation_of[i]) {
            const Quantity& q = values[*annotation_of[i]].quantity;
            magnitude = q.value;
            if (force_label.empty()) force_label = force_label_of(q);
        } else if (!is_support(d.klass)) {
            review = true;
        }
        const double m = magnitude.value_or(1.0);
        switch (d.klass) {
            case DetectionClass::Fixed:
            case DetectionClass::Roller:
            case DetectionClass::Simple:
                supports.push_back({{support_kind_of(d.klass), place(proj[i].t)}, review});
                break;
            case DetectionClass::PointLoad:
                ploads.push_back({{m, place(proj[i].t)}, review});
                break;
            case DetectionClass::DistributedLoad:
                dloads.push_back({{place(proj[i].extent->first), place(proj[i].extent->second), m, m}, review});
                break;
            case DetectionClass::Moment:
                moments.push_back({{m, place(proj[i].t)}, review});
                break;
        }
    }

    std::stable_sort(supports.begin(), supports.end(),
                     [](const auto& a, const auto& b) { return a.first.position < b.first.position; });
    std::stable_sort(ploads.begin(), ploads.end(), [](const auto& a, const auto& b) {
        return std::tie(a.first.position, a.first.magnitude) < std::tie(b.first.position, b.first.magnitude);
    });
    std::stable_sort(dloads.begin(), dloads.end(), [](const auto& a, const auto& b) {
        return std::tie(a.first.start, a.first.end) < std::tie(b.first.start, b.first.end);
    });
    std::stable_sort(moments.begin(), moments.end(), [](const auto& a, const auto& b) {
        return std::tie(a.first.position, a.first.magnitude) < std::tie(b.first.position, b.first.magnitude);
    });

    BeamSpec& spec = report.spec;
    spec.length = span;
    spec.units.length = scale.length_label.empty() ? UnitLabels{}.length : scale.length_label;
    spec.units.force = force_label.empty() ? UnitLabels{}.force : force_label;
    spec.section = options.section;
    auto collect = [&](auto& list, auto& target, std::string_view name) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            target.push_back(list[i].first);
            if (list[i].second) report.needs_review.push_back(path_of(name, i));
        }
    };
    collect(supports, spec.supports, "supports");
    collect(ploads, spec.point_loads, "point_loads");
    collect(dloads, spec.distributed_loads, "distributed_loads");
    collect(moments, spec.moments, "moments");

    const ValidationOutcome outcome = validate_beam(spec);
    for (const auto& issue : outcome.errors) {
        report.warnings.push_back(
            fmt::format("fatal: {} at {}: {}", code_name(issue.code), issue.path, issue.message));
    }
    return report;
}

std::string serialize_report(const InferenceReport& report) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["spec"] = ordered_json::parse(serialize_beam(report.spec));
    doc["warnings"] = report.warnings;
    doc["needs_review"] = report.needs_review;
    return doc.dump();
}

}  // namespace pbs
