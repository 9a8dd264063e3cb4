#include "pbs/service.hpp"

#include <charconv>
#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "pbs/beam.hpp"
#include "pbs/detections.hpp"
#include "pbs/diagrams.hpp"
#include "pbs/geometry.hpp"
#include "pbs/log.hpp"
#include "pbs/solver.hpp"

namespace pbs {

namespace {

using nlohmann::ordered_json;

int status_for_semantic(ErrorCode code) {
    switch (code) {
        case ErrorCode::Transport:
        case ErrorCode::HttpStatus:
        case ErrorCode::SchemaViolation:
        case ErrorCode::ValidationFailed:
            return 502;
        case ErrorCode::LlmDisabled:
            return 404;
        case ErrorCode::EmptyImage:
            return 400;
        case ErrorCode::Unstable:
        case ErrorCode::OutOfRange:
        case ErrorCode::DuplicateSupport:
        case ErrorCode::FixedNotAtEnd:
        case ErrorCode::NonPositiveLength:
        case ErrorCode::InvalidValue:
        case ErrorCode::NoSupports:
        case ErrorCode::DegenerateAxis:
        case ErrorCode::SingularSystem:
            return 422;
        default:
            return 500;
    }
}

struct QueryError {
    std::string name;
};

double query_number(const QueryParams& q, const std::string& name, double fallback) {
    auto it = q.find(name);
    if (it == q.end()) return fallback;
    double v = 0.0;
    const auto& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) throw QueryError{name};
    return v;
}

std::optional<double> query_optional(const QueryParams& q, const std::string& name) {
    if (!q.count(name)) return std::nullopt;
    return query_number(q, name, 0.0);
}

HttpReply query_error(const QueryError& e) {
    return HttpReply::error({400, "invalid_query", "query parameter '" + e.name + "' is not a valid number", e.name});
}

QueryParams params_of(const httplib::Request& req) {
    QueryParams out;
    for (const auto& [k, v] : req.params) out.emplace(k, v);
    return out;
}

void write(httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
}

}  // namespace

std::string ApiError::to_json() const {
    ordered_json doc;
    doc["status"] = status;
    doc["code"] = code;
    doc["detail"] = detail;
    if (field_path) doc["field_path"] = *field_path;
    return doc.dump();
}

ApiError ApiError::from(const Error& e, int status) {
    ApiError out;
    out.status = status;
    out.code = std::string(code_name(e.code()));
    out.detail = e.detail();
    if (!e.path().empty()) out.field_path = e.path();
    return out;
}

Service::Service(ServiceOptions options) : options_(std::move(options)) {}

HttpReply Service::infer(std::string_view body, const QueryParams& query) const {
    InferenceOptions opts;
    try {
        opts.confidence_threshold = query_number(query, "confidence", opts.confidence_threshold);
        opts.iou_threshold = query_number(query, "iou", opts.iou_threshold);
    } catch (const QueryError& e) {
        return query_error(e);
    }
    DetectionSet ds;
    try {
        ds = parse_detections(body);
    } catch (const Error& e) {
        return HttpReply::error(ApiError::from(e, 400));
    }
    try {
        InferenceReport report = build_beam_spec(ds, opts);
        if (report.fatal()) {
            std::string detail;
            for (const auto& w : report.warnings) {
                if (w.rfind("fatal:", 0) != 0) continue;
                if (!detail.empty()) detail += "; ";
                detail += w;
            }
            return HttpReply::error({422, "inference_failed", detail, std::nullopt});
        }
        return HttpReply::json(serialize_report(report));
    } catch (const Error& e) {
        return HttpReply::error(ApiError::from(e, status_for_semantic(e.code())));
    }
}

HttpReply Service::solve(std::string_view body, const QueryParams& query) const {
    int samples = kDefaultSamples;
    std::optional<double> ei;
    try {
        const double s = query_number(query, "samples", kDefaultSamples);
        if (s < 2 || s > 1e6 || std::floor(s) != s) throw QueryError{"samples"};
        samples = static_cast<int>(s);
        ei = query_optional(query, "ei");
        if (ei && !(*ei > 0.0)) throw QueryError{"ei"};
    } catch (const QueryError& e) {
        return query_error(e);
    }
    BeamSpec spec;
    try {
        spec = deserialize_beam(body);
    } catch (const Error& e) {
        return HttpReply::error(ApiError::from(e, 400));
    }
    try {
        const BeamSolution sol = solve_beam(require_valid(spec), ei);
        std::string out = "{\"solution\":" + serialize_solution(sol) + ",\"diagrams\":{";
        bool first = true;
        for (DiagramKind kind : {DiagramKind::Shear, DiagramKind::Moment, DiagramKind::Deflection}) {
            if (!first) out += ',';
            first = false;
            out += '"';
            out += diagram_kind_name(kind);
            out += "\":";
            out += serialize_series(sample_series(sol, kind, samples));
        }
        out += "}}";
        return HttpReply::json(std::move(out));
    } catch (const Error& e) {
        ApiError err = ApiError::from(e, status_for_semantic(e.code()));
        if (e.code() == ErrorCode::SingularSystem) {
            err.detail = "structural failure (not numeric): " + err.detail;
        }
        return HttpReply::error(err);
    }
}

HttpReply Service::llm_infer(std::string_view body) const {
    if (!options_.llm) {
        return HttpReply::error(
            {404, "llm_disabled", "no LLM session configured; use /api/infer with a detections file", std::nullopt});
    }
    try {
        const auto* bytes = reinterpret_cast<const std::uint8_t*>(body.data());
        LlmRequest req = build_request(std::span<const std::uint8_t>(bytes, body.size()), *options_.llm);
        ValidatedBeam beam = request_structured_beam(req, *options_.llm);
        InferenceReport report;
        report.spec = beam.spec();
        return HttpReply::json(serialize_report(report));
    } catch (const Error& e) {
        return HttpReply::error(ApiError::from(e, status_for_semantic(e.code())));
    }
}

HttpReply Service::schema() const {
    return HttpReply::json(beam_schema());
}

HttpReply Service::health() const {
    ordered_json doc;
    doc["status"] = "ok";
    doc["version"] = kVersion;
    return HttpReply::json(doc.dump());
}

void Service::install(httplib::Server& server) const {
    const Service* self = this;
    server.Post("/api/infer", [self](const httplib::Request& req, httplib::Response& res) {
        write(res, self->infer(req.body, params_of(req)));
    });
    server.Post("/api/solve", [self](const httplib::Request& req, httplib::Response& res) {
        write(res, self->solve(req.body, params_of(req)));
    });
    server.Post("/api/llm/infer", [self](const httplib::Request& req, httplib::Response& res) {
        write(res, self->llm_infer(req.body));
    });
    server.Get("/api/schema", [self](const httplib::Request&, httplib::Response& res) { write(res, self->schema()); });
    server.Get("/api/health", [self](const httplib::Request&, httplib::Response& res) { write(res, self->health()); });

    bool ui = false;
    if (options_.ui_dir && std::filesystem::exists(*options_.ui_dir / "index.html")) {
        ui = server.set_mount_point("/", options_.ui_dir->string());
    }
    if (!ui) {
        server.Get("/", [](const httplib::Request&, httplib::Response& res) {
            write(res, HttpReply::error({404, "ui_not_found", "no UI bundle is installed", std::nullopt}));
        });
    }

    if (options_.cors_allow) {
        const std::string origin = *options_.cors_allow;
        server.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
            res.set_header("Access-Control-Allow-Origin", origin);
            res.set_header("Vary", "Origin");
        });
        server.Options(R"(/api/.*)", [origin](const httplib::Request&, httplib::Response& res) {
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
            res.status = 204;
        });
    }

    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return;
        const int status = res.status >= 400 ? res.status : 404;
        write(res, HttpReply::error({status, status == 404 ? "not_found" : "http_error",
                                     "no handler for " + req.method + " " + req.path, std::nullopt}));
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "unexpected failure";
        try {
            if (ep) std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        logger()->error("request handler failed: {}", what);
        write(res, HttpReply::error({500, "internal", what, std::nullopt}));
    });
}

void run_server(const Service& service, httplib::Server& server, const std::string& host, int port,
                const std::function<void(int)>& on_bound) {
    service.install(server);
    // Without SO_REUSEPORT, so a port held by another process is reported as taken.
    server.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    int bound = port;
    if (port == 0) {
        bound = server.bind_to_any_port(host);
    } else if (!server.bind_to_port(host, port)) {
        bound = -1;
    }
    if (bound <= 0) {
        throw Error(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
    }
    if (on_bound) on_bound(bound);
    server.listen_after_bind();
}

}  // namespace pbs
