#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "pbs/beam.hpp"

namespace pbs {

struct LlmConfig {
    std::string endpoint_url;  // e.g. https://api.example.com/v1/chat/completions
    std::string api_key;       // never logged or serialized
    std::string model_name = "gpt-4o";
    std::chrono::milliseconds timeout{30000};
    int max_retries = 3;
    // Transport retries wait base, 2*base, 4*base, ...
    std::chrono::milliseconds backoff_base{1000};

    // PBS_LLM_API_KEY, PBS_LLM_ENDPOINT, PBS_LLM_MODEL. Returns nullopt unless
    // both key and endpoint are set and non-empty.
    static std::optional<LlmConfig> from_env();

    // Human-readable description with the key redacted.
    std::string describe() const;
};

struct LlmRequest {
    std::string instruction;
    std::string image_payload;  // base64
    std::string mime_type;
    std::string body;           // serialized wire payload
};

// The fixed extraction prompt, embedding the BeamSpec schema.
const std::string& extraction_instruction();

// Deterministic chat-completions payload with temperature 0. Throws EmptyImage.
LlmRequest build_request(std::span<const std::uint8_t> image, const LlmConfig& config);

// Text between the first '{' and the last '}' (inclusive). Throws
// SchemaViolation when the text holds no braces.
std::string extract_document(std::string_view text);

// The firewall applied to every upstream reply: unwrap a chat-completions
// envelope if present, strip surrounding prose, strict-parse, validate.
// Throws SchemaViolation or ValidationFailed.
ValidatedBeam accept_llm_response(std::string_view body);

// HTTP round trip with bounded retries. Throws Transport, HttpStatus,
// SchemaViolation or ValidationFailed.
ValidatedBeam request_structured_beam(const LlmRequest& request, const LlmConfig& config);

enum class Backend { Llm, Detections };

struct BackendEnvironment {
    std::optional<std::string> api_key;
    std::optional<std::string> endpoint;
    bool no_llm = false;
    bool have_detections_file = false;

    static BackendEnvironment from_process_env(bool have_detections_file, bool no_llm);
};

// Throws NoBackend when neither an LLM session nor a detections file exists.
Backend backend_select(const BackendEnvironment& env);

std::string base64_encode(std::span<const std::uint8_t> bytes);

}  // namespace pbs
