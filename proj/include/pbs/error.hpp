#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pbs {

// Stable, machine-readable failure codes shared by every layer (library,
// HTTP service, CLI). The string form returned by code_name() is part of
// the public API and must not change between releases.
enum class ErrorCode {
    // parsing
    Syntax,
    UnknownField,
    MissingField,
    TypeMismatch,
    UnknownClass,
    BBoxOutOfRange,
    InvalidValue,
    // annotation text
    NoNumber,
    UnknownUnit,
    Ambiguous,
    // validation
    Unstable,
    OutOfRange,
    DuplicateSupport,
    FixedNotAtEnd,
    NonPositiveLength,
    // geometry
    NoSupports,
    DegenerateAxis,
    // solver
    SingularSystem,
    UnresolvedUnknown,
    OutOfDomain,
    // diagrams
    EmptySeries,
    // llm backend
    EmptyImage,
    Transport,
    HttpStatus,
    SchemaViolation,
    ValidationFailed,
    NoBackend,
    LlmDisabled,
    // io
    Io,
};

std::string_view code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string detail, std::string path = {})
        : std::runtime_error(compose(code, detail, path)),
          code_(code),
          detail_(std::move(detail)),
          path_(std::move(path)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }
    // Field path into the offending document ("supports[1].position"), empty
    // when the error is not tied to a field.
    const std::string& path() const noexcept { return path_; }

    // Upstream HTTP status for ErrorCode::HttpStatus.
    std::optional<int> upstream_status;

private:
    static std::string compose(ErrorCode code, const std::string& detail, const std::string& path);

    ErrorCode code_;
    std::string detail_;
    std::string path_;
};

}  // namespace pbs
