#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pbs {

// YOLO-style normalized box: center and size in [0,1], origin top-left,
// y pointing down.
struct BBox {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;

    double left() const noexcept { return cx - w / 2.0; }
    double right() const noexcept { return cx + w / 2.0; }
    double top() const noexcept { return cy - h / 2.0; }
    double bottom() const noexcept { return cy + h / 2.0; }

    bool operator==(const BBox&) const = default;
};

enum class DetectionClass { PointLoad, DistributedLoad, Fixed, Roller, Simple, Moment };

std::string_view detection_class_name(DetectionClass k) noexcept;
std::optional<DetectionClass> parse_detection_class(std::string_view name) noexcept;
bool is_support(DetectionClass k) noexcept;

struct Detection {
    DetectionClass klass = DetectionClass::PointLoad;
    BBox bbox;
    double confidence = 0.0;

    bool operator==(const Detection&) const = default;
};

struct AnnotationBox {
    BBox bbox;
    std::string text;

    bool operator==(const AnnotationBox&) const = default;
};

struct ImageSize {
    long long width = 0;
    long long height = 0;

    bool operator==(const ImageSize&) const = default;
};

struct DetectionSet {
    ImageSize image;
    std::vector<Detection> detections;
    std::vector<AnnotationBox> annotations;

    bool operator==(const DetectionSet&) const = default;
};

inline constexpr double kDefaultConfidenceThreshold = 0.25;
inline constexpr double kDefaultIouThreshold = 0.45;
// Detections kept by NMS but below this confidence are flagged for review.
inline constexpr double kReviewConfidence = 0.60;

DetectionSet parse_detections(std::string_view text);
std::string serialize_detections(const DetectionSet& ds);

double iou(const BBox& a, const BBox& b) noexcept;

// Class-wise greedy non-maximum suppression. Output is ordered by descending
// confidence, ties broken by (cx, cy, w, h).
std::vector<Detection> nms(std::vector<Detection> detections, double iou_threshold, double confidence_threshold);

}  // namespace pbs
