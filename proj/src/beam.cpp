#include "pbs/beam.hpp"

#include <cmath>

#include "pbs/detail/strict_json.hpp"

namespace pbs {

using detail::json;
using detail::ordered_json;
using detail::StrictObject;

std::string_view support_kind_name(SupportKind kind) noexcept {
    switch (kind) {
        case SupportKind::Simple: return "simple";
        case SupportKind::Roller: return "roller";
        case SupportKind::Fixed: return "fixed";
    }
    return "simple";
}

std::optional<SupportKind> parse_support_kind(std::string_view name) noexcept {
    if (name == "simple") return SupportKind::Simple;
    if (name == "roller") return SupportKind::Roller;
    if (name == "fixed") return SupportKind::Fixed;
    return std::nullopt;
}

std::optional<double> SectionProperties::flexural_rigidity() const noexcept {
    if (youngs_modulus && second_moment) {
        return *youngs_modulus * *second_moment;
    }
    return std::nullopt;
}

namespace {

std::string indexed(std::string_view list, std::size_t i, std::string_view field) {
    std::string out(list);
    out += '[';
    out += std::to_string(i);
    out += ']';
    if (!field.empty()) {
        out += '.';
        out += field;
    }
    return out;
}

class IssueCollector {
public:
    void add(ErrorCode code, std::string path, std::string message) {
        issues.push_back({code, std::move(path), std::move(message)});
    }

    void check_position(double x, double length, std::string path) {
        if (!std::isfinite(x)) {
            add(ErrorCode::InvalidValue, std::move(path), "position must be finite");
        } else if (x < 0.0 || x > length) {
            add(ErrorCode::OutOfRange, std::move(path), "position outside [0, length]");
        }
    }

    void check_magnitude(double m, std::string path) {
        if (!std::isfinite(m) || m == 0.0) {
            add(ErrorCode::InvalidValue, std::move(path), "magnitude must be finite and nonzero");
        }
    }

    std::vector<ValidationIssue> issues;
};

}  // namespace

ValidationOutcome validate_beam(const BeamSpec& spec) {
    IssueCollector c;
    const double L = spec.length;
    const bool length_ok = std::isfinite(L) && L > 0.0;
    if (!length_ok) {
        c.add(ErrorCode::NonPositiveLength, "length", "beam length must be strictly positive");
    }

    bool any_fixed = false;
    for (std::size_t i = 0; i < spec.supports.size(); ++i) {
        const Support& s = spec.supports[i];
        if (s.kind == SupportKind::Fixed) {
            any_fixed = true;
        }
        if (length_ok) {
            c.check_position(s.position, L, indexed("supports", i, "position"));
            if (s.kind == SupportKind::Fixed && s.position != 0.0 && s.position != L) {
                c.add(ErrorCode::FixedNotAtEnd, indexed("supports", i, "position"),
                      "fixed supports are allowed only at x = 0 or x = length");
            }
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (spec.supports[j].position == s.position) {
                c.add(ErrorCode::DuplicateSupport, indexed("supports", i, "position"),
                      "shares its position with supports[" + std::to_string(j) + "]");
                break;
            }
        }
    }
    if (spec.supports.empty()) {
        c.add(ErrorCode::Unstable, "supports", "at least one support is required");
    } else if (spec.supports.size() < 2 && !any_fixed) {
        c.add(ErrorCode::Unstable, "supports", "a single non-fixed support leaves a rigid-body mechanism");
    }

    for (std::size_t i = 0; i < spec.point_loads.size(); ++i) {
        const PointLoad& p = spec.point_loads[i];
        c.check_magnitude(p.magnitude, indexed("point_loads", i, "magnitude"));
        if (length_ok) {
            c.check_position(p.position, L, indexed("point_loads", i, "position"));
        }
    }

    for (std::size_t i = 0; i < spec.distributed_loads.size(); ++i) {
        const DistributedLoad& d = spec.distributed_loads[i];
        if (length_ok) {
            c.check_position(d.start, L, indexed("distributed_loads", i, "start"));
            c.check_position(d.end, L, indexed("distributed_loads", i, "end"));
        }
        if (std::isfinite(d.start) && std::isfinite(d.end) && !(d.start < d.end)) {
            c.add(ErrorCode::InvalidValue, indexed("distributed_loads", i, "end"), "end must exceed start");
        }
        if (!std::isfinite(d.start_intensity) || !std::isfinite(d.end_intensity)) {
            c.add(ErrorCode::InvalidValue, indexed("distributed_loads", i, ""), "intensities must be finite");
        } else if (d.start_intensity == 0.0 && d.end_intensity == 0.0) {
            c.add(ErrorCode::InvalidValue, indexed("distributed_loads", i, ""), "both intensities are zero");
        }
    }

    for (std::size_t i = 0; i < spec.moments.size(); ++i) {
        const AppliedMoment& m = spec.moments[i];
        c.check_magnitude(m.magnitude, indexed("moments", i, "magnitude"));
        if (length_ok) {
            c.check_position(m.position, L, indexed("moments", i, "position"));
        }
    }

    auto check_section = [&](const std::optional<double>& v, const char* path) {
        if (v && !(std::isfinite(*v) && *v > 0.0)) {
            c.add(ErrorCode::InvalidValue, path, "section properties must be strictly positive");
        }
    };
    check_section(spec.section.youngs_modulus, "section.youngs_modulus");
    check_section(spec.section.second_moment, "section.second_moment");

    ValidationOutcome out;
    if (c.issues.empty()) {
        out.beam = ValidatedBeam(spec);
    } else {
        out.errors = std::move(c.issues);
    }
    return out;
}

std::string describe_issues(const std::vector<ValidationIssue>& issues) {
    std::string out;
    for (const auto& issue : issues) {
        if (!out.empty()) {
            out += "; ";
        }
        out += std::string(code_name(issue.code)) + " at " + issue.path + ": " + issue.message;
    }
    return out;
}

ValidatedBeam require_valid(const BeamSpec& spec) {
    auto outcome = validate_beam(spec);
    if (!outcome.ok()) {
        const auto& first = outcome.errors.front();
        throw Error(first.code, describe_issues(outcome.errors), first.path);
    }
    return std::move(*outcome.beam);
}

std::string serialize_beam(const BeamSpec& spec) {
    ordered_json doc;
    doc["length"] = spec.length;
    doc["units"] = ordered_json{{"length", spec.units.length}, {"force", spec.units.force}};

    auto supports = ordered_json::array();
    for (const auto& s : spec.supports) {
        supports.push_back({{"kind", support_kind_name(s.kind)}, {"position", s.position}});
    }
    doc["supports"] = std::move(supports);

    auto ploads = ordered_json::array();
    for (const auto& p : spec.point_loads) {
        ploads.push_back({{"magnitude", p.magnitude}, {"position", p.position}});
    }
    doc["point_loads"] = std::move(ploads);

    auto dloads = ordered_json::array();
    for (const auto& d : spec.distributed_loads) {
        dloads.push_back({{"start", d.start},
                          {"end", d.end},
                          {"start_intensity", d.start_intensity},
                          {"end_intensity", d.end_intensity}});
    }
    doc["distributed_loads"] = std::move(dloads);

    auto moments = ordered_json::array();
    for (const auto& m : spec.moments) {
        moments.push_back({{"magnitude", m.magnitude}, {"position", m.position}});
    }
    doc["moments"] = std::move(moments);

    if (!spec.section.empty()) {
        ordered_json section = ordered_json::object();
        if (spec.section.youngs_modulus) {
            section["youngs_modulus"] = *spec.section.youngs_modulus;
        }
        if (spec.section.second_moment) {
            section["second_moment"] = *spec.section.second_moment;
        }
        doc["section"] = std::move(section);
    }
    return doc.dump();
}

namespace {

template <typename T, typename Fn>
std::vector<T> read_list(StrictObject& obj, const std::string& key, Fn&& read_item) {
    const json& arr = obj.array(key);
    std::vector<T> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        StrictObject item(arr[i], indexed(key, i, ""));
        out.push_back(read_item(item));
        item.finish();
    }
    return out;
}

}  // namespace

BeamSpec deserialize_beam(std::string_view text) {
    const json doc = detail::parse_json(text);
    StrictObject root(doc, "");
    BeamSpec spec;
    spec.length = root.number("length");

    StrictObject units(root.required("units"), "units");
    spec.units.length = units.string("length");
    spec.units.force = units.string("force");
    units.finish();

    spec.supports = read_list<Support>(root, "supports", [](StrictObject& o) {
        Support s;
        std::string kind = o.string("kind");
        auto parsed = parse_support_kind(kind);
        if (!parsed) {
            throw Error(ErrorCode::TypeMismatch, "unknown support kind '" + kind + "'", o.path_of("kind"));
        }
        s.kind = *parsed;
        s.position = o.number("position");
        return s;
    });
    spec.point_loads = read_list<PointLoad>(root, "point_loads", [](StrictObject& o) {
        return PointLoad{o.number("magnitude"), o.number("position")};
    });
    spec.distributed_loads = read_list<DistributedLoad>(root, "distributed_loads", [](StrictObject& o) {
        DistributedLoad d;
        d.start = o.number("start");
        d.end = o.number("end");
        d.start_intensity = o.number("start_intensity");
        d.end_intensity = o.number("end_intensity");
        return d;
    });
    spec.moments = read_list<AppliedMoment>(root, "moments", [](StrictObject& o) {
        return AppliedMoment{o.number("magnitude"), o.number("position")};
    });

    if (const json* section = root.optional("section")) {
        StrictObject s(*section, "section");
        if (const json* e = s.optional("youngs_modulus")) {
            spec.section.youngs_modulus = detail::as_number(*e, "section.youngs_modulus");
        }
        if (const json* i = s.optional("second_moment")) {
            spec.section.second_moment = detail::as_number(*i, "section.second_moment");
        }
        s.finish();
    }
    root.finish();
    return spec;
}

namespace {

ordered_json closed_object(ordered_json properties, std::vector<std::string> required) {
    ordered_json out;
    out["type"] = "object";
    out["properties"] = std::move(properties);
    out["required"] = std::move(required);
    out["additionalProperties"] = false;
    return out;
}

std::string build_schema() {
    const ordered_json number = {{"type", "number"}};
    const ordered_json text = {{"type", "string"}};
    auto array_of = [](ordered_json items) {
        return ordered_json{{"type", "array"}, {"items", std::move(items)}};
    };

    ordered_json support_kind = {{"type", "string"}, {"enum", {"simple", "roller", "fixed"}}};
    ordered_json props;
    props["length"] = number;
    props["units"] = closed_object({{"length", text}, {"force", text}}, {"length", "force"});
    props["supports"] =
        array_of(closed_object({{"kind", support_kind}, {"position", number}}, {"kind", "position"}));
    props["point_loads"] =
        array_of(closed_object({{"magnitude", number}, {"position", number}}, {"magnitude", "position"}));
    props["distributed_loads"] = array_of(closed_object(
        {{"start", number}, {"end", number}, {"start_intensity", number}, {"end_intensity", number}},
        {"start", "end", "start_intensity", "end_intensity"}));
    props["moments"] =
        array_of(closed_object({{"magnitude", number}, {"position", number}}, {"magnitude", "position"}));
    props["section"] = closed_object({{"youngs_modulus", number}, {"second_moment", number}}, {});

    ordered_json schema;
    schema["$schema"] = "https://json-schema.org/draft/2020-12/schema";
    schema["title"] = "BeamSpec";
    ordered_json body =
        closed_object(std::move(props), {"length", "units", "supports", "point_loads", "distributed_loads", "moments"});
    for (auto it = body.begin(); it != body.end(); ++it) {
        schema[it.key()] = it.value();
    }
    return schema.dump(2);
}

}  // namespace

const std::string& beam_schema() {
    static const std::string schema = build_schema();
    return schema;
}

}  // namespace pbs
