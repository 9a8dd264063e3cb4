#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "pbs/error.hpp"
#include "pbs/llm.hpp"

namespace httplib {
class Server;
}

namespace pbs {

inline constexpr std::string_view kVersion = "0.1.0";

// Body of every 4xx/5xx response.
struct ApiError {
    int status = 500;
    std::string code;
    std::string detail;
    std::optional<std::string> field_path;

    std::string to_json() const;
    static ApiError from(const Error& e, int status);
};

struct HttpReply {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;

    static HttpReply json(std::string body) { return {200, "application/json", std::move(body)}; }
    static HttpReply error(const ApiError& e) { return {e.status, "application/json", e.to_json()}; }
};

using QueryParams = std::map<std::string, std::string>;

struct ServiceOptions {
    std::optional<std::filesystem::path> ui_dir;
    std::optional<std::string> cors_allow;
    std::optional<LlmConfig> llm;
};

// Stateless request handlers. Each method is a pure function of its
// arguments and the immutable options, so one instance can serve any number
// of concurrent requests.
class Service {
public:
    explicit Service(ServiceOptions options);

    HttpReply infer(std::string_view body, const QueryParams& query) const;
    HttpReply solve(std::string_view body, const QueryParams& query) const;
    HttpReply llm_infer(std::string_view body) const;
    HttpReply schema() const;
    HttpReply health() const;

    // Registers all routes (and the UI mount when present) on a server.
    void install(httplib::Server& server) const;

    const ServiceOptions& options() const noexcept { return options_; }

private:
    ServiceOptions options_;
};

// Binds host:port (port 0 picks an ephemeral port), reports the bound port
// through on_bound, then serves until the server is stopped. Throws
// ErrorCode::Io when the port cannot be bound.
void run_server(const Service& service, httplib::Server& server, const std::string& host, int port,
                const std::function<void(int)>& on_bound);

}  // namespace pbs
