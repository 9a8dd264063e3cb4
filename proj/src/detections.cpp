#include "pbs/detections.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "pbs/detail/strict_json.hpp"
#include "pbs/error.hpp"

namespace pbs {

using detail::json;
using detail::ordered_json;
using detail::StrictObject;

namespace {

constexpr double kClampTolerance = 1e-6;

BBox read_bbox(const json& value, const std::string& path) {
    const json& arr = detail::as_array(value, path);
    if (arr.size() != 4) {
        throw Error(ErrorCode::TypeMismatch, "bbox must be [cx, cy, w, h]", path);
    }
    BBox b{detail::as_number(arr[0], path + "[0]"), detail::as_number(arr[1], path + "[1]"),
           detail::as_number(arr[2], path + "[2]"), detail::as_number(arr[3], path + "[3]")};
    const bool centers_ok = b.cx >= 0.0 && b.cx <= 1.0 && b.cy >= 0.0 && b.cy <= 1.0;
    const bool sizes_ok = b.w > 0.0 && b.w <= 1.0 && b.h > 0.0 && b.h <= 1.0;
    const bool inside = b.left() >= -kClampTolerance && b.right() <= 1.0 + kClampTolerance &&
                        b.top() >= -kClampTolerance && b.bottom() <= 1.0 + kClampTolerance;
    if (!centers_ok || !sizes_ok || !inside) {
        throw Error(ErrorCode::BBoxOutOfRange, "bbox outside the normalized image", path);
    }
    return b;
}

ordered_json bbox_json(const BBox& b) {
    return ordered_json::array({b.cx, b.cy, b.w, b.h});
}

}  // namespace

std::string_view detection_class_name(DetectionClass k) noexcept {
    switch (k) {
        case DetectionClass::PointLoad: return "pload";
        case DetectionClass::DistributedLoad: return "dload";
        case DetectionClass::Fixed: return "fixed";
        case DetectionClass::Roller: return "roller";
        case DetectionClass::Simple: return "simple";
        case DetectionClass::Moment: return "moment";
    }
    return "pload";
}

std::optional<DetectionClass> parse_detection_class(std::string_view name) noexcept {
    if (name == "pload") return DetectionClass::PointLoad;
    if (name == "dload") return DetectionClass::DistributedLoad;
    if (name == "fixed") return DetectionClass::Fixed;
    if (name == "roller") return DetectionClass::Roller;
    if (name == "simple") return DetectionClass::Simple;
    if (name == "moment") return DetectionClass::Moment;
    return std::nullopt;
}

bool is_support(DetectionClass k) noexcept {
    return k == DetectionClass::Fixed || k == DetectionClass::Roller || k == DetectionClass::Simple;
}

DetectionSet parse_detections(std::string_view text) {
    const json doc = detail::parse_json(text);
    StrictObject root(doc, "");
    DetectionSet ds;

    StrictObject image(root.required("image"), "image");
    ds.image.width = image.integer("width");
    ds.image.height = image.integer("height");
    image.finish();
    if (ds.image.width <= 0 || ds.image.height <= 0) {
        throw Error(ErrorCode::InvalidValue, "image dimensions must be positive", "image");
    }

    const json& dets = root.array("detections");
    for (std::size_t i = 0; i < dets.size(); ++i) {
        const std::string path = "detections[" + std::to_string(i) + "]";
        StrictObject d(dets[i], path);
        std::string name = d.string("class");
        auto klass = parse_detection_class(name);
        if (!klass) {
            throw Error(ErrorCode::UnknownClass, "class '" + name + "' is not in the taxonomy", d.path_of("class"));
        }
        Detection det;
        det.klass = *klass;
        det.bbox = read_bbox(d.required("bbox"), d.path_of("bbox"));
        det.confidence = d.number("confidence");
        if (!(det.confidence >= 0.0 && det.confidence <= 1.0)) {
            throw Error(ErrorCode::InvalidValue, "confidence must lie in [0, 1]", d.path_of("confidence"));
        }
        d.finish();
        ds.detections.push_back(det);
    }

    const json& anns = root.array("annotations");
    for (std::size_t i = 0; i < anns.size(); ++i) {
        const std::string path = "annotations[" + std::to_string(i) + "]";
        StrictObject a(anns[i], path);
        AnnotationBox box;
        box.bbox = read_bbox(a.required("bbox"), a.path_of("bbox"));
        box.text = a.string("text");
        if (box.text.empty()) {
            throw Error(ErrorCode::InvalidValue, "annotation text is empty", a.path_of("text"));
        }
        a.finish();
        ds.annotations.push_back(std::move(box));
    }
    root.finish();
    return ds;
}

std::string serialize_detections(const DetectionSet& ds) {
    ordered_json doc;
    doc["image"] = ordered_json{{"width", ds.image.width}, {"height", ds.image.height}};
    auto dets = ordered_json::array();
    for (const auto& d : ds.detections) {
        dets.push_back(
            {{"class", detection_class_name(d.klass)}, {"bbox", bbox_json(d.bbox)}, {"confidence", d.confidence}});
    }
    doc["detections"] = std::move(dets);
    auto anns = ordered_json::array();
    for (const auto& a : ds.annotations) {
        anns.push_back({{"bbox", bbox_json(a.bbox)}, {"text", a.text}});
    }
    doc["annotations"] = std::move(anns);
    return doc.dump();
}

double iou(const BBox& a, const BBox& b) noexcept {
    const double ix = std::max(0.0, std::min(a.right(), b.right()) - std::max(a.left(), b.left()));
    const double iy = std::max(0.0, std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top()));
    const double inter = ix * iy;
    if (inter <= 0.0) {
        return 0.0;
    }
    // Areas from the same edge arithmetic as the overlap, so iou(a, a) == 1.
    const double area_a = (a.right() - a.left()) * (a.bottom() - a.top());
    const double area_b = (b.right() - b.left()) * (b.bottom() - b.top());
    const double uni = area_a + area_b - inter;
    return std::clamp(inter / uni, 0.0, 1.0);
}

std::vector<Detection> nms(std::vector<Detection> detections, double iou_threshold, double confidence_threshold) {
    std::erase_if(detections, [&](const Detection& d) { return d.confidence < confidence_threshold; });
    std::sort(detections.begin(), detections.end(), [](const Detection& a, const Detection& b) {
        if (a.confidence != b.confidence) {
            return a.confidence > b.confidence;
        }
        return std::tie(a.bbox.cx, a.bbox.cy, a.bbox.w, a.bbox.h, a.klass) <
               std::tie(b.bbox.cx, b.bbox.cy, b.bbox.w, b.bbox.h, b.klass);
    });

    std::vector<Detection> kept;
    for (const Detection& candidate : detections) {
        const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
            return k.klass == candidate.klass && iou(k.bbox, candidate.bbox) > iou_threshold;
        });
        if (!suppressed) {
            kept.push_back(candidate);
        }
    }
    return kept;
}

}  // namespace pbs
