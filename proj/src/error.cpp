#include "pbs/error.hpp"

namespace pbs {

std::string_view code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Syntax: return "syntax";
        case ErrorCode::UnknownField: return "unknown_field";
        case ErrorCode::MissingField: return "missing_field";
        case ErrorCode::TypeMismatch: return "type_mismatch";
        case ErrorCode::UnknownClass: return "unknown_class";
        case ErrorCode::BBoxOutOfRange: return "bbox_out_of_range";
        case ErrorCode::InvalidValue: return "invalid_value";
        case ErrorCode::NoNumber: return "no_number";
        case ErrorCode::UnknownUnit: return "unknown_unit";
        case ErrorCode::Ambiguous: return "ambiguous";
        case ErrorCode::Unstable: return "unstable";
        case ErrorCode::OutOfRange: return "out_of_range";
        case ErrorCode::DuplicateSupport: return "duplicate_support";
        case ErrorCode::FixedNotAtEnd: return "fixed_not_at_end";
        case ErrorCode::NonPositiveLength: return "non_positive_length";
        case ErrorCode::NoSupports: return "no_supports";
        case ErrorCode::DegenerateAxis: return "degenerate_axis";
        case ErrorCode::SingularSystem: return "singular_system";
        case ErrorCode::UnresolvedUnknown: return "unresolved_unknown";
        case ErrorCode::OutOfDomain: return "out_of_domain";
        case ErrorCode::EmptySeries: return "empty_series";
        case ErrorCode::EmptyImage: return "empty_image";
        case ErrorCode::Transport: return "transport";
        case ErrorCode::HttpStatus: return "http_status";
        case ErrorCode::SchemaViolation: return "schema_violation";
        case ErrorCode::ValidationFailed: return "validation_failed";
        case ErrorCode::NoBackend: return "no_backend";
        case ErrorCode::LlmDisabled: return "llm_disabled";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

std::string Error::compose(ErrorCode code, const std::string& detail, const std::string& path) {
    std::string out(code_name(code));
    if (!path.empty()) {
        out += " at ";
        out += path;
    }
    if (!detail.empty()) {
        out += ": ";
        out += detail;
    }
    return out;
}

}  // namespace pbs
