#include "pbs/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>

#include "pbs/beam.hpp"
#include "pbs/detections.hpp"
#include "pbs/diagrams.hpp"
#include "pbs/geometry.hpp"
#include "pbs/service.hpp"
#include "pbs/solver.hpp"

namespace pbs {

namespace {

namespace fs = std::filesystem;

struct EnvironmentFailure {
    std::string message;
};

struct SolveFlags {
    std::optional<double> ei;
    std::optional<double> youngs;
    std::optional<double> inertia;
    int samples = kDefaultSamples;
    std::string format = "text";
    std::string out_dir = ".";
    std::optional<double> deflection_scale;
    std::optional<std::string> deflection_unit;
    bool deflection_up = false;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f) {
    auto* ei = cmd->add_option("--ei", f.ei, "Flexural rigidity EI")->check(CLI::PositiveNumber);
    auto* e = cmd->add_option("--e", f.youngs, "Young's modulus (used with --i)")->check(CLI::PositiveNumber);
    auto* i = cmd->add_option("--i", f.inertia, "Second moment of area (used with --e)")->check(CLI::PositiveNumber);
    e->needs(i);
    i->needs(e);
    ei->excludes(e);
    ei->excludes(i);
    cmd->add_option("--samples", f.samples, "Samples per diagram")->check(CLI::Range(2, 1000000));
    cmd->add_option("--format", f.format, "Artifacts to write besides summary.txt")
        ->check(CLI::IsMember({"json", "svg", "text"}));
    cmd->add_option("--out", f.out_dir, "Output directory");
    cmd->add_option("--deflection-scale", f.deflection_scale, "Display factor for deflection values");
    cmd->add_option("--deflection-unit", f.deflection_unit, "Display unit label for deflection");
    cmd->add_flag("--deflection-up", f.deflection_up, "Plot deflection positive-up");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw EnvironmentFailure{"cannot read '" + path + "'"};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw EnvironmentFailure{"cannot write '" + path.string() + "'"};
    }
    out << content;
}

void print_issues(std::ostream& err, const std::vector<ValidationIssue>& issues) {
    for (const auto& issue : issues) {
        err << "error: " << code_name(issue.code) << " at " << issue.path << ": " << issue.message << '\n';
    }
}

void print_error(std::ostream& err, const Error& e) {
    err << "error: " << e.what() << '\n';
}

// Shared by `solve` and `from-detections`, so that both commands produce
// byte-identical artifacts for the same BeamSpec.
int emit_solution(const BeamSpec& spec, const SolveFlags& flags, std::ostream& out, std::ostream& err) {
    ValidationOutcome outcome = validate_beam(spec);
    if (!outcome.ok()) {
        print_issues(err, outcome.errors);
        return kExitValidation;
    }
    std::optional<double> ei = flags.ei;
    if (flags.youngs && flags.inertia) {
        ei = *flags.youngs * *flags.inertia;
    }

    BeamSolution sol;
    try {
        sol = solve_beam(*outcome.beam, ei);
    } catch (const Error& e) {
        print_error(err, e);
        return kExitSolver;
    }

    std::error_code ec;
    fs::create_directories(flags.out_dir, ec);
    if (ec) {
        throw EnvironmentFailure{"cannot create '" + flags.out_dir + "': " + ec.message()};
    }
    const fs::path dir(flags.out_dir);

    const std::string summary = summary_text(sol);
    out << summary;
    write_file(dir / "summary.txt", summary);

    if (flags.format == "text") {
        return kExitOk;
    }
    std::vector<DiagramSeries> series;
    for (DiagramKind kind : {DiagramKind::Shear, DiagramKind::Moment, DiagramKind::Deflection}) {
        DiagramSeries s = sample_series(sol, kind, flags.samples);
        if (kind == DiagramKind::Deflection && (flags.deflection_scale || flags.deflection_unit)) {
            s = rescale_series(std::move(s), flags.deflection_scale.value_or(1.0),
                               flags.deflection_unit.value_or(s.unit_label));
        }
        series.push_back(std::move(s));
    }
    if (flags.format == "json") {
        std::string doc = "{\"solution\":" + serialize_solution(sol) + ",\"diagrams\":{";
        for (std::size_t i = 0; i < series.size(); ++i) {
            if (i) doc += ',';
            doc += "\"" + std::string(diagram_kind_name(series[i].kind)) + "\":" + serialize_series(series[i]);
        }
        doc += "}}\n";
        write_file(dir / "solution.json", doc);
    } else {
        SvgOptions opts;
        opts.deflection_down = !flags.deflection_up;
        opts.length_label = sol.spec.units.length;
        for (const auto& s : series) {
            write_file(dir / (std::string(diagram_kind_name(s.kind)) + ".svg"), render_svg(s, opts));
        }
    }
    return kExitOk;
}

int cmd_solve(const std::string& file, const SolveFlags& flags, std::ostream& out, std::ostream& err) {
    BeamSpec spec;
    try {
        spec = deserialize_beam(read_file(file));
    } catch (const Error& e) {
        print_error(err, e);
        return kExitValidation;
    }
    return emit_solution(spec, flags, out, err);
}

int cmd_from_detections(const std::string& file, const InferenceOptions& opts, bool review, const SolveFlags& flags,
                        std::ostream& out, std::ostream& err) {
    InferenceReport report;
    try {
        report = build_beam_spec(parse_detections(read_file(file)), opts);
    } catch (const Error& e) {
        err << "error: " << e.detail() << '\n';
        return kExitValidation;
    }
    if (review) {
        out << serialize_report(report) << '\n';
        return kExitOk;
    }
    for (const auto& w : report.warnings) {
        err << "warning: " << w << '\n';
    }
    for (const auto& path : report.needs_review) {
        err << "needs review: " << path << '\n';
    }
    if (report.fatal()) {
        err << "error: inference failed; rerun with --review to inspect and correct the interpretation\n";
        return kExitValidation;
    }
    return emit_solution(report.spec, flags, out, err);
}

int cmd_validate(const std::string& file, std::ostream& out, std::ostream& err) {
    BeamSpec spec;
    try {
        spec = deserialize_beam(read_file(file));
    } catch (const Error& e) {
        print_error(err, e);
        return kExitValidation;
    }
    ValidationOutcome outcome = validate_beam(spec);
    if (!outcome.ok()) {
        print_issues(err, outcome.errors);
        return kExitValidation;
    }
    out << "valid\n";
    return kExitOk;
}

int cmd_serve(const std::string& host, int port, const std::optional<std::string>& ui_dir,
              const std::optional<std::string>& cors, bool no_llm, std::ostream& out, std::ostream& err) {
    ServiceOptions opts;
    if (ui_dir) opts.ui_dir = fs::path(*ui_dir);
    opts.cors_allow = cors;
    if (!no_llm) opts.llm = LlmConfig::from_env();
    Service service(std::move(opts));
    httplib::Server server;
    try {
        run_server(service, server, host, port, [&](int bound) {
            out << "listening on http://" << host << ":" << bound << std::endl;
        });
    } catch (const Error& e) {
        print_error(err, e);
        return kExitEnvironment;
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"pbs: beam diagram interpretation and analytical beam solver", "pbs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    SolveFlags solve_flags;
    std::string spec_file;
    auto* solve = app.add_subcommand("solve", "Solve a BeamSpec document");
    solve->add_option("spec-file", spec_file, "BeamSpec JSON file")->required();
    add_solve_flags(solve, solve_flags);

    SolveFlags det_flags;
    std::string det_file;
    InferenceOptions infer_opts;
    bool review = false;
    auto* from_det = app.add_subcommand("from-detections", "Infer a BeamSpec from detector output and solve it");
    from_det->add_option("det-file", det_file, "Detection JSON file")->required();
    from_det->add_option("--confidence", infer_opts.confidence_threshold, "Confidence threshold")
        ->check(CLI::Range(0.0, 1.0));
    from_det->add_option("--iou", infer_opts.iou_threshold, "NMS IoU threshold")->check(CLI::Range(0.0, 1.0));
    from_det->add_flag("--review", review, "Print the inference report instead of solving");
    add_solve_flags(from_det, det_flags);

    std::string host = "127.0.0.1";
    int port = 8080;
    std::optional<std::string> ui_dir;
    std::optional<std::string> cors;
    bool no_llm = false;
    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    serve->add_option("--port", port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--ui-dir", ui_dir, "Directory holding the UI bundle");
    serve->add_option("--cors-allow", cors, "Additional allowed CORS origin");
    serve->add_flag("--no-llm", no_llm, "Ignore any configured LLM session");

    auto* schema = app.add_subcommand("schema", "Print the BeamSpec JSON schema");

    std::string validate_file;
    auto* validate = app.add_subcommand("validate", "Validate a BeamSpec document");
    validate->add_option("file", validate_file, "BeamSpec JSON file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*solve) return cmd_solve(spec_file, solve_flags, out, err);
        if (*from_det) return cmd_from_detections(det_file, infer_opts, review, det_flags, out, err);
        if (*serve) return cmd_serve(host, port, ui_dir, cors, no_llm, out, err);
        if (*schema) {
            out << beam_schema() << '\n';
            return kExitOk;
        }
        if (*validate) return cmd_validate(validate_file, out, err);
    } catch (const EnvironmentFailure& e) {
        err << "error: " << e.message << '\n';
        return kExitEnvironment;
    } catch (const Error& e) {
        print_error(err, e);
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitEnvironment;
    }
    return kExitValidation;
}

}  // namespace pbs
