#include "pbs/llm.hpp"

#include <cstdlib>
#include <regex>
#include <thread>

#include <openssl/evp.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "pbs/log.hpp"

namespace pbs {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::optional<std::string> env_value(const char* name) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
}

std::string sniff_mime(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= 4 && bytes[0] == 0x89 && bytes[1] == 'P' && bytes[2] == 'N' && bytes[3] == 'G') {
        return "image/png";
    }
    if (bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == 0xD8) {
        return "image/jpeg";
    }
    return "image/png";
}

struct ParsedUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

ParsedUrl parse_url(const std::string& url) {
    static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(url, m, re)) {
        throw Error(ErrorCode::Transport, "endpoint is not an http(s) URL");
    }
    return {m.str(1), m[2].matched ? m.str(2) : "/"};
}

std::string build_instruction() {
    std::string text;
    text +=
        "You read a hand-drawn idealized beam diagram from the attached image and report its structural "
        "parameters. Act as a parameter extractor only: never compute reactions, internal forces or "
        "deflections.\n";
    text +=
        "Conventions: positions are measured from the left end of the beam along its axis; point and "
        "distributed loads are positive downward; applied moments are positive counter-clockwise; unit "
        "labels are copied as written in the drawing.\n";
    text +=
        "Fields: length, units.length, units.force, supports[].kind (simple | roller | fixed), "
        "supports[].position, point_loads[].magnitude, point_loads[].position, distributed_loads[].start, "
        "distributed_loads[].end, distributed_loads[].start_intensity, distributed_loads[].end_intensity, "
        "moments[].magnitude, moments[].position, section.youngs_modulus (optional), section.second_moment "
        "(optional).\n";
    text += "The document must validate against this JSON Schema; additional fields are rejected:\n";
    text += beam_schema();
    text += "\nRespond with only the schema document.";
    return text;
}

}  // namespace

std::optional<LlmConfig> LlmConfig::from_env() {
    auto key = env_value("PBS_LLM_API_KEY");
    auto endpoint = env_value("PBS_LLM_ENDPOINT");
    if (!key || !endpoint) return std::nullopt;
    LlmConfig c;
    c.api_key = *key;
    c.endpoint_url = *endpoint;
    if (auto model = env_value("PBS_LLM_MODEL")) c.model_name = *model;
    return c;
}

std::string LlmConfig::describe() const {
    return "endpoint=" + endpoint_url + " model=" + model_name + " api_key=" + (api_key.empty() ? "<unset>" : "<redacted>");
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                  static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

const std::string& extraction_instruction() {
    static const std::string text = build_instruction();
    return text;
}

LlmRequest build_request(std::span<const std::uint8_t> image, const LlmConfig& config) {
    if (image.empty()) {
        throw Error(ErrorCode::EmptyImage, "image payload is empty");
    }
    LlmRequest req;
    req.instruction = extraction_instruction();
    req.image_payload = base64_encode(image);
    req.mime_type = sniff_mime(image);

    ordered_json body;
    body["model"] = config.model_name;
    body["temperature"] = 0;
    ordered_json content = ordered_json::array();
    content.push_back({{"type", "text"}, {"text", req.instruction}});
    content.push_back(
        {{"type", "image_url"},
         {"image_url", {{"url", "data:" + req.mime_type + ";base64," + req.image_payload}}}});
    body["messages"] = ordered_json::array({ordered_json{{"role", "user"}, {"content", std::move(content)}}});
    req.body = body.dump();
    return req;
}

std::string extract_document(std::string_view text) {
    const auto open = text.find('{');
    const auto close = text.rfind('}');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
        throw Error(ErrorCode::SchemaViolation, "response contains no JSON document");
    }
    return std::string(text.substr(open, close - open + 1));
}

ValidatedBeam accept_llm_response(std::string_view body) {
    std::string text(body);
    // Chat-completions envelope: the document is the first choice's content.
    json envelope = json::parse(body.begin(), body.end(), nullptr, false);
    if (envelope.is_object() && envelope.contains("choices")) {
        const json& choices = envelope["choices"];
        const json* content = nullptr;
        if (choices.is_array() && !choices.empty() && choices[0].is_object() && choices[0].contains("message")) {
            const json& msg = choices[0]["message"];
            if (msg.is_object() && msg.contains("content") && msg["content"].is_string()) {
                content = &msg["content"];
            }
        }
        if (content == nullptr) {
            throw Error(ErrorCode::SchemaViolation, "completion envelope carries no message content");
        }
        text = content->get<std::string>();
    }

    BeamSpec spec;
    try {
        spec = deserialize_beam(extract_document(text));
    } catch (const Error& e) {
        throw Error(ErrorCode::SchemaViolation, e.what(), e.path());
    }
    auto outcome = validate_beam(spec);
    if (!outcome.ok()) {
        throw Error(ErrorCode::ValidationFailed, describe_issues(outcome.errors), outcome.errors.front().path);
    }
    return std::move(*outcome.beam);
}

ValidatedBeam request_structured_beam(const LlmRequest& request, const LlmConfig& config) {
    if (config.endpoint_url.empty()) {
        throw Error(ErrorCode::LlmDisabled, "no LLM endpoint configured");
    }
    const ParsedUrl url = parse_url(config.endpoint_url);
    httplib::Client client(url.origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    client.set_bearer_token_auth(config.api_key);

    auto log = logger();
    const int attempts = std::max(0, config.max_retries) + 1;
    std::string last_error;
    for (int attempt = 1; attempt <= attempts; ++attempt) {
        log->info("llm request to {} (model {}), attempt {}/{}", config.endpoint_url, config.model_name, attempt,
                  attempts);
        auto res = client.Post(url.path, request.body, "application/json");
        if (res) {
            if (res->status != 200) {
                log->warn("llm endpoint answered HTTP {}", res->status);
                Error err(ErrorCode::HttpStatus, "upstream answered HTTP " + std::to_string(res->status));
                err.upstream_status = res->status;
                throw err;
            }
            try {
                return accept_llm_response(res->body);
            } catch (const Error& e) {
                log->warn("llm response rejected: {}", e.what());
                throw;
            }
        }
        last_error = httplib::to_string(res.error());
        log->warn("llm transport failure on attempt {}/{}: {}", attempt, attempts, last_error);
        if (attempt < attempts) {
            std::this_thread::sleep_for(config.backoff_base * (1 << (attempt - 1)));
        }
    }
    throw Error(ErrorCode::Transport,
                "no response after " + std::to_string(attempts) + " attempts (" + last_error + ")");
}

BackendEnvironment BackendEnvironment::from_process_env(bool have_detections_file, bool no_llm) {
    BackendEnvironment env;
    env.api_key = env_value("PBS_LLM_API_KEY");
    env.endpoint = env_value("PBS_LLM_ENDPOINT");
    env.no_llm = no_llm;
    env.have_detections_file = have_detections_file;
    return env;
}

Backend backend_select(const BackendEnvironment& env) {
    const bool session = env.api_key && !env.api_key->empty() && env.endpoint && !env.endpoint->empty();
    if (session && !env.no_llm) {
        return Backend::Llm;
    }
    if (env.have_detections_file) {
        return Backend::Detections;
    }
    throw Error(ErrorCode::NoBackend, "no LLM session configured and no detections file given");
}

}  // namespace pbs
