#include "pbs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

namespace pbs {

namespace {

constexpr double kPivotTolerance = 1e-12;

void push_if_nonzero(std::vector<SingularityTerm>& terms, double c, double a, int n) {
    if (c != 0.0) {
        terms.push_back(SingularityTerm::constant(c, a, n));
    }
}

std::size_t index_of(const std::vector<Unknown>& unknowns, UnknownKind kind) {
    for (std::size_t i = 0; i < unknowns.size(); ++i) {
        if (unknowns[i].kind == kind) return i;
    }
    return unknowns.size();
}

// q -> V -> M -> EI*theta -> EI*y, with the integration constants injected at
// the slope and deflection levels.
struct ResponseLevels {
    std::vector<SingularityTerm> q, v, m, slope, deflection;
};

ResponseLevels integrate_levels(const LoadFunction& lf) {
    ResponseLevels r;
    r.q = lf.terms;
    r.v = integrate_terms(r.q);
    r.m = integrate_terms(r.v);
    r.slope = integrate_terms(r.m);
    const std::size_t c1 = index_of(lf.unknowns, UnknownKind::SlopeConstant);
    const std::size_t c2 = index_of(lf.unknowns, UnknownKind::DeflectionConstant);
    r.slope.push_back(SingularityTerm::symbolic(1.0, c1, 0.0, 0));
    r.deflection = integrate_terms(r.slope);
    r.deflection.push_back(SingularityTerm::symbolic(1.0, c2, 0.0, 0));
    return r;
}

void check_domain(const BeamSolution& s, double x) {
    if (!(x >= 0.0 && x <= s.length())) {
        throw Error(ErrorCode::OutOfDomain, "x = " + std::to_string(x) + " lies outside [0, length]");
    }
}

}  // namespace

std::string unknown_label(const Unknown& u) {
    switch (u.kind) {
        case UnknownKind::ReactionForce: return "R[" + std::to_string(u.support) + "]";
        case UnknownKind::ReactionMoment: return "M_r[" + std::to_string(u.support) + "]";
        case UnknownKind::SlopeConstant: return "C1";
        case UnknownKind::DeflectionConstant: return "C2";
    }
    return "?";
}

LoadFunction assemble_load_function(const ValidatedBeam& beam) {
    const BeamSpec& spec = beam.spec();
    LoadFunction lf;
    const std::size_t n = spec.supports.size();
    for (std::size_t i = 0; i < n; ++i) {
        lf.unknowns.push_back({UnknownKind::ReactionForce, i});
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (spec.supports[i].kind == SupportKind::Fixed) {
            lf.unknowns.push_back({UnknownKind::ReactionMoment, i});
        }
    }
    lf.unknowns.push_back({UnknownKind::SlopeConstant, 0});
    lf.unknowns.push_back({UnknownKind::DeflectionConstant, 0});

    for (std::size_t k = 0; k < lf.unknowns.size(); ++k) {
        const Unknown& u = lf.unknowns[k];
        const double a = spec.supports[u.support].position;
        if (u.kind == UnknownKind::ReactionForce) {
            lf.terms.push_back(SingularityTerm::symbolic(1.0, k, a, -1));
        } else if (u.kind == UnknownKind::ReactionMoment) {
            lf.terms.push_back(SingularityTerm::symbolic(-1.0, k, a, -2));
        }
    }

    for (const auto& p : spec.point_loads) {
        lf.terms.push_back(SingularityTerm::constant(-p.magnitude, p.position, -1));
    }
    for (const auto& d : spec.distributed_loads) {
        // Downward ramp w(x) from start_intensity at a to end_intensity at b,
        // closed by opposite terms at b so q vanishes beyond the load.
        const double a = d.start;
        const double b = d.end;
        const double slope = (d.end_intensity - d.start_intensity) / (b - a);
        push_if_nonzero(lf.terms, -d.start_intensity, a, 0);
        push_if_nonzero(lf.terms, -slope, a, 1);
        push_if_nonzero(lf.terms, d.end_intensity, b, 0);
        push_if_nonzero(lf.terms, slope, b, 1);
    }
    for (const auto& m : spec.moments) {
        lf.terms.push_back(SingularityTerm::constant(-m.magnitude, m.position, -2));
    }
    return lf;
}

LinearSystem assemble_system(const ValidatedBeam& beam) {
    const BeamSpec& spec = beam.spec();
    const double L = spec.length;
    const LoadFunction lf = assemble_load_function(beam);
    const ResponseLevels r = integrate_levels(lf);
    const std::size_t m = lf.unknowns.size();

    LinearSystem sys;
    sys.unknowns = lf.unknowns;
    auto add_row = [&](LinearForm form, std::string label) {
        sys.matrix.push_back(std::move(form.row));
        sys.rhs.push_back(-form.constant);
        sys.row_labels.push_back(std::move(label));
    };

    // Evaluating at L with the left-closed convention includes every term
    // sitting at L, i.e. this is the value just past the right end.
    LinearForm shear_end = linear_form_at(r.v, L, m);
    LinearForm moment_end = linear_form_at(r.m, L, m);
    // Sum of moments about x = 0 (CCW positive) equals L*V(L+) - M(L+).
    LinearForm moment_origin;
    moment_origin.row.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        moment_origin.row[k] = L * shear_end.row[k] - moment_end.row[k];
    }
    moment_origin.constant = L * shear_end.constant - moment_end.constant;

    add_row(shear_end, "sum Fy = 0");
    add_row(std::move(moment_origin), "sum M(0) = 0");
    for (std::size_t i = 0; i < spec.supports.size(); ++i) {
        add_row(linear_form_at(r.deflection, spec.supports[i].position, m),
                "EIy(" + std::to_string(spec.supports[i].position) + ") = 0");
    }
    for (std::size_t i = 0; i < spec.supports.size(); ++i) {
        if (spec.supports[i].kind == SupportKind::Fixed) {
            add_row(linear_form_at(r.slope, spec.supports[i].position, m),
                    "EItheta(" + std::to_string(spec.supports[i].position) + ") = 0");
        }
    }
    return sys;
}

std::vector<double> solve_linear_system(const LinearSystem& system) {
    const std::size_t n = system.size();
    std::vector<std::vector<double>> a = system.matrix;
    std::vector<double> b = system.rhs;

    // Row equilibration: rows mix force, moment and EI*length^3 units.
    for (std::size_t i = 0; i < n; ++i) {
        double scale = 0.0;
        for (double v : a[i]) scale = std::max(scale, std::abs(v));
        if (scale == 0.0) {
            throw Error(ErrorCode::SingularSystem,
                        "equation '" + system.row_labels[i] + "' involves no unknown: the beam is unstable");
        }
        for (double& v : a[i]) v /= scale;
        b[i] /= scale;
    }
    double norm = 0.0;
    for (const auto& row : a) {
        double s = 0.0;
        for (double v : row) s += std::abs(v);
        norm = std::max(norm, s);
    }
    const double threshold = kPivotTolerance * norm;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) <= threshold) {
            throw Error(ErrorCode::SingularSystem,
                        "no independent equation determines " + unknown_label(system.unknowns[col]) +
                            ": the supports do not restrain the beam");
        }
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

BeamSolution solve_beam(const ValidatedBeam& beam, std::optional<double> ei_override) {
    const BeamSpec& spec = beam.spec();
    const LoadFunction lf = assemble_load_function(beam);
    const LinearSystem sys = assemble_system(beam);
    std::vector<double> values = solve_linear_system(sys);
    for (double& v : values) v += 0.0;  // no signed zeros in output
    const ResponseLevels r = integrate_levels(lf);

    BeamSolution s;
    s.spec = spec;
    for (std::size_t i = 0; i < spec.supports.size(); ++i) {
        s.reactions.push_back({i, 0.0, std::nullopt});
    }
    for (std::size_t k = 0; k < lf.unknowns.size(); ++k) {
        const Unknown& u = lf.unknowns[k];
        switch (u.kind) {
            case UnknownKind::ReactionForce: s.reactions[u.support].force = values[k]; break;
            case UnknownKind::ReactionMoment: s.reactions[u.support].moment = values[k]; break;
            case UnknownKind::SlopeConstant: s.c1 = values[k]; break;
            case UnknownKind::DeflectionConstant: s.c2 = values[k]; break;
        }
    }

    if (ei_override) {
        s.ei = *ei_override;
        s.ei_normalized = false;
    } else if (auto ei = spec.section.flexural_rigidity()) {
        s.ei = *ei;
        s.ei_normalized = false;
    }
    if (!(std::isfinite(s.ei) && s.ei > 0.0)) {
        throw Error(ErrorCode::InvalidValue, "flexural rigidity must be strictly positive", "ei");
    }

    s.load = resolve_terms(r.q, values);
    s.shear = resolve_terms(r.v, values);
    s.moment = resolve_terms(r.m, values);
    s.ei_slope = resolve_terms(r.slope, values);
    s.ei_deflection = resolve_terms(r.deflection, values);
    return s;
}

double shear_at(const BeamSolution& s, double x) {
    check_domain(s, x);
    return evaluate_terms(s.shear, x);
}

double moment_at(const BeamSolution& s, double x) {
    check_domain(s, x);
    return evaluate_terms(s.moment, x);
}

double slope_at(const BeamSolution& s, double x) {
    check_domain(s, x);
    return evaluate_terms(s.ei_slope, x) / s.ei;
}

double deflection_at(const BeamSolution& s, double x) {
    check_domain(s, x);
    return evaluate_terms(s.ei_deflection, x) / s.ei;
}

std::string serialize_solution(const BeamSolution& s) {
    using nlohmann::ordered_json;
    ordered_json doc;
    auto reactions = ordered_json::array();
    for (const auto& r : s.reactions) {
        ordered_json item;
        item["support"] = r.support;
        item["force"] = r.force;
        if (r.moment) item["moment"] = *r.moment;
        reactions.push_back(std::move(item));
    }
    doc["reactions"] = std::move(reactions);
    doc["constants"] = ordered_json{{"c1", s.c1}, {"c2", s.c2}};
    doc["ei"] = s.ei;
    doc["ei_normalized"] = s.ei_normalized;
    auto terms = [](const std::vector<SingularityTerm>& list) {
        auto arr = ordered_json::array();
        for (const auto& t : list) {
            arr.push_back({{"c", t.coeff.scale}, {"a", t.offset}, {"n", t.exponent}});
        }
        return arr;
    };
    doc["q"] = terms(s.load);
    doc["shear"] = terms(s.shear);
    doc["moment"] = terms(s.moment);
    doc["slope"] = terms(s.ei_slope);
    doc["deflection"] = terms(s.ei_deflection);
    return doc.dump();
}

}  // namespace pbs
