#include "pbs/diagrams.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace pbs {

namespace {

constexpr double kBisectionTolerance = 1e-12;
constexpr int kBracketSubdivisions = 256;

const std::vector<SingularityTerm>& terms_for(const BeamSolution& s, DiagramKind kind) {
    switch (kind) {
        case DiagramKind::Shear: return s.shear;
        case DiagramKind::Moment: return s.moment;
        case DiagramKind::Deflection: return s.ei_deflection;
    }
    return s.shear;
}

double value_divisor(const BeamSolution& s, DiagramKind kind) {
    return kind == DiagramKind::Deflection ? s.ei : 1.0;
}

bool has_jumps(DiagramKind kind) {
    return kind != DiagramKind::Deflection;
}

std::vector<double> element_positions(const BeamSpec& spec) {
    std::set<double> xs{0.0, spec.length};
    for (const auto& s : spec.supports) xs.insert(s.position);
    for (const auto& p : spec.point_loads) xs.insert(p.position);
    for (const auto& d : spec.distributed_loads) {
        xs.insert(d.start);
        xs.insert(d.end);
    }
    for (const auto& m : spec.moments) xs.insert(m.position);
    return {xs.begin(), xs.end()};
}

// Polynomial in the local coordinate u = x - origin, coefficients by power.
using Poly = std::vector<double>;

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

Poly piece_polynomial(const std::vector<SingularityTerm>& terms, double origin) {
    Poly p(kMaxExponent + 1, 0.0);
    for (const auto& t : terms) {
        if (t.exponent < 0 || t.offset > origin) continue;
        // (u + d)^n with d = origin - a
        const double d = origin - t.offset;
        for (int k = 0; k <= t.exponent; ++k) {
            p[k] += t.coeff.scale * binomial(t.exponent, k) * std::pow(d, t.exponent - k);
        }
    }
    return p;
}

Poly derivative(const Poly& p) {
    Poly d(p.size() > 1 ? p.size() - 1 : 1, 0.0);
    for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = p[k] * static_cast<double>(k);
    return d;
}

double horner(const Poly& p, double u) {
    double v = 0.0;
    for (std::size_t k = p.size(); k-- > 0;) v = v * u + p[k];
    return v;
}

// Effective degree after dropping coefficients negligible against the
// polynomial's magnitude on the piece.
int effective_degree(const Poly& p, double h) {
    double mag = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) mag = std::max(mag, std::abs(p[k]) * std::pow(h, double(k)));
    if (mag == 0.0) return -1;
    for (std::size_t k = p.size(); k-- > 0;) {
        if (std::abs(p[k]) * std::pow(h, double(k)) > 1e-14 * mag) return static_cast<int>(k);
    }
    return -1;
}

std::vector<double> closed_form_roots(const Poly& p, int degree) {
    std::vector<double> roots;
    if (degree == 1) {
        roots.push_back(-p[0] / p[1]);
    } else if (degree == 2) {
        const double a = p[2], b = p[1], c = p[0];
        const double disc = b * b - 4 * a * c;
        if (disc >= 0) {
            const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
            if (q != 0.0) {
                roots.push_back(q / a);
                roots.push_back(c / q);
            } else {
                roots.push_back(0.0);
            }
        }
    } else if (degree == 3) {
        // Depressed cubic t^3 + P t + Q = 0 with x = t - b/3.
        const double a = p[2] / p[3], b = p[1] / p[3], c = p[0] / p[3];
        const double P = b - a * a / 3.0;
        const double Q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
        const double shift = -a / 3.0;
        const double disc = Q * Q / 4.0 + P * P * P / 27.0;
        if (disc > 0) {
            const double s = std::sqrt(disc);
            roots.push_back(std::cbrt(-Q / 2.0 + s) + std::cbrt(-Q / 2.0 - s) + shift);
        } else if (P == 0.0) {
            roots.push_back(shift);
        } else {
            const double r = 2.0 * std::sqrt(-P / 3.0);
            const double arg = std::clamp(3.0 * Q / (P * r), -1.0, 1.0);
            const double phi = std::acos(arg) / 3.0;
            for (int k = 0; k < 3; ++k) {
                roots.push_back(r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) + shift);
            }
        }
    }
    return roots;
}

std::vector<double> bisection_roots(const Poly& p, double h, double tol) {
    std::vector<double> roots;
    double prev_u = 0.0;
    double prev_v = horner(p, prev_u);
    for (int i = 1; i <= kBracketSubdivisions; ++i) {
        const double u = h * i / kBracketSubdivisions;
        const double v = horner(p, u);
        if (prev_v == 0.0) {
            roots.push_back(prev_u);
        } else if ((prev_v < 0) != (v < 0) && v != 0.0) {
            double lo = prev_u, hi = u, flo = prev_v;
            while (hi - lo > tol) {
                const double mid = 0.5 * (lo + hi);
                const double fm = horner(p, mid);
                if ((fm < 0) == (flo < 0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_u = u;
        prev_v = v;
    }
    return roots;
}

// Real roots of p strictly inside (0, h).
std::vector<double> roots_in_piece(const Poly& p, double h, double length) {
    const int degree = effective_degree(p, h);
    if (degree <= 0) return {};
    std::vector<double> raw;
    if (degree <= 3) {
        raw = closed_form_roots(p, degree);
        // One Newton step cleans up cancellation in the closed forms.
        const Poly dp = derivative(p);
        for (double& r : raw) {
            const double slope = horner(dp, r);
            if (slope != 0.0) r -= horner(p, r) / slope;
        }
    } else {
        raw = bisection_roots(p, h, kBisectionTolerance * length);
    }
    std::vector<double> out;
    for (double r : raw) {
        if (std::isfinite(r) && r > 0.0 && r < h) out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string_view diagram_title(DiagramKind kind) {
    switch (kind) {
        case DiagramKind::Shear: return "Shear force";
        case DiagramKind::Moment: return "Bending moment";
        case DiagramKind::Deflection: return "Deflection";
    }
    return "";
}

std::string_view diagram_symbol(DiagramKind kind) {
    switch (kind) {
        case DiagramKind::Shear: return "V";
        case DiagramKind::Moment: return "M";
        case DiagramKind::Deflection: return "y";
    }
    return "";
}

}  // namespace

std::string_view diagram_kind_name(DiagramKind kind) noexcept {
    switch (kind) {
        case DiagramKind::Shear: return "shear";
        case DiagramKind::Moment: return "moment";
        case DiagramKind::Deflection: return "deflection";
    }
    return "shear";
}

std::string_view critical_tag_name(CriticalTag tag) noexcept {
    switch (tag) {
        case CriticalTag::Max: return "max";
        case CriticalTag::Min: return "min";
        case CriticalTag::Zero: return "zero";
        case CriticalTag::Jump: return "jump";
    }
    return "max";
}

std::string diagram_unit(const BeamSolution& s, DiagramKind kind) {
    switch (kind) {
        case DiagramKind::Shear: return s.spec.units.force;
        case DiagramKind::Moment: return s.spec.units.force + "·" + s.spec.units.length;
        case DiagramKind::Deflection: return s.ei_normalized ? "EI·" + s.spec.units.length : s.spec.units.length;
    }
    return {};
}

double diagram_value(const BeamSolution& s, DiagramKind kind, double x) {
    return evaluate_terms(terms_for(s, kind), x) / value_divisor(s, kind) + 0.0;
}

double diagram_left_limit(const BeamSolution& s, DiagramKind kind, double x) {
    if (!has_jumps(kind)) {
        return diagram_value(s, kind, x);
    }
    return evaluate_terms_left(terms_for(s, kind), x) / value_divisor(s, kind) + 0.0;
}

DiagramSeries sample_series(const BeamSolution& s, DiagramKind kind, int n) {
    if (n < 2) {
        throw Error(ErrorCode::InvalidValue, "at least two samples are required", "samples");
    }
    const double L = s.length();
    const auto& terms = terms_for(s, kind);
    const std::vector<double> elements = element_positions(s.spec);

    std::set<double> xs(elements.begin(), elements.end());
    for (int i = 0; i < n; ++i) {
        xs.insert(i == n - 1 ? L : L * static_cast<double>(i) / static_cast<double>(n - 1));
    }

    DiagramSeries series;
    series.kind = kind;
    series.unit_label = diagram_unit(s, kind);
    const std::set<double> element_set(elements.begin(), elements.end());
    for (double x : xs) {
        if (has_jumps(kind) && element_set.count(x) && jump_at(terms, x) != 0.0) {
            series.points.push_back({x, diagram_left_limit(s, kind, x)});
        }
        series.points.push_back({x, diagram_value(s, kind, x)});
    }
    series.critical_points = find_extrema(s, kind);
    return series;
}

std::vector<CriticalPoint> find_extrema(const BeamSolution& s, DiagramKind kind) {
    const double L = s.length();
    const auto& terms = terms_for(s, kind);
    std::set<double> breaks{0.0, L};
    for (const auto& t : terms) {
        if (t.offset >= 0.0 && t.offset <= L) breaks.insert(t.offset);
    }
    for (double x : element_positions(s.spec)) breaks.insert(x);
    const std::vector<double> bp(breaks.begin(), breaks.end());

    std::vector<SamplePoint> candidates;
    std::vector<CriticalPoint> out;
    for (std::size_t i = 0; i < bp.size(); ++i) {
        const double x = bp[i];
        const double left = diagram_left_limit(s, kind, x);
        const double value = diagram_value(s, kind, x);
        candidates.push_back({x, left});
        candidates.push_back({x, value});
        if (has_jumps(kind) && jump_at(terms, x) != 0.0) {
            out.push_back({x, value, CriticalTag::Jump});
        }
        if (i + 1 == bp.size()) break;

        const double h = bp[i + 1] - x;
        const Poly p = piece_polynomial(terms, x);
        for (double u : roots_in_piece(derivative(p), h, L)) {
            candidates.push_back({x + u, diagram_value(s, kind, x + u)});
        }
        for (double u : roots_in_piece(p, h, L)) {
            const double delta = 1e-7 * h;
            const double before = horner(p, std::max(0.0, u - delta));
            const double after = horner(p, std::min(h, u + delta));
            if ((before < 0) != (after < 0)) {
                out.push_back({x + u, 0.0, CriticalTag::Zero});
            }
        }
    }

    auto max_it = candidates.begin();
    auto min_it = candidates.begin();
    for (auto it = candidates.begin(); it != candidates.end(); ++it) {
        if (it->value > max_it->value) max_it = it;
        if (it->value < min_it->value) min_it = it;
    }
    out.push_back({max_it->x, max_it->value, CriticalTag::Max});
    out.push_back({min_it->x, min_it->value, CriticalTag::Min});
    std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        if (a.x != b.x) return a.x < b.x;
        return static_cast<int>(a.tag) < static_cast<int>(b.tag);
    });
    return out;
}

DiagramSeries rescale_series(DiagramSeries series, double factor, std::string unit_label) {
    for (auto& p : series.points) p.value *= factor;
    for (auto& c : series.critical_points) c.value *= factor;
    if (factor < 0) {
        for (auto& c : series.critical_points) {
            if (c.tag == CriticalTag::Max) c.tag = CriticalTag::Min;
            else if (c.tag == CriticalTag::Min) c.tag = CriticalTag::Max;
        }
    }
    series.unit_label = std::move(unit_label);
    return series;
}

std::string render_svg(const DiagramSeries& series, const SvgOptions& options) {
    if (series.points.empty()) {
        throw Error(ErrorCode::EmptySeries, "cannot render an empty series");
    }
    const double W = options.width, H = options.height;
    const double ml = 80, mr = 30, mt = 40, mb = 50;
    const double pw = W - ml - mr, ph = H - mt - mb;
    const bool flip = series.kind == DiagramKind::Deflection && options.deflection_down;
    auto shown = [&](double v) { return flip ? -v : v; };

    const double x0 = series.points.front().x;
    const double x1 = series.points.back().x;
    double lo = 0.0, hi = 0.0;
    for (const auto& p : series.points) {
        lo = std::min(lo, shown(p.value));
        hi = std::max(hi, shown(p.value));
    }
    if (hi - lo == 0.0) {
        hi += 1.0;
        lo -= 1.0;
    }
    const double span = x1 > x0 ? x1 - x0 : 1.0;
    auto px = [&](double x) { return ml + (x - x0) / span * pw; };
    auto py = [&](double v) { return mt + (hi - shown(v)) / (hi - lo) * ph; };
    const double base = mt + hi / (hi - lo) * ph;

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" "
                       "viewBox=\"0 0 {} {}\">\n",
                       options.width, options.height, options.width, options.height);
    out += fmt::format("<text x=\"{:.3f}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">{}</text>\n", ml,
                       diagram_title(series.kind));

    // axes and beam baseline
    out += fmt::format("<line x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" stroke=\"#000\" />\n", ml, mt,
                       ml, mt + ph);
    out += fmt::format(
        "<line x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" stroke=\"#000\" stroke-width=\"2\" />\n", ml,
        base, ml + pw, base);

    std::string pts = fmt::format("{:.3f},{:.3f}", px(x0), base);
    for (const auto& p : series.points) {
        pts += fmt::format(" {:.3f},{:.3f}", px(p.x), py(p.value));
    }
    pts += fmt::format(" {:.3f},{:.3f}", px(x1), base);
    out += fmt::format(
        "<polygon points=\"{}\" fill=\"#4a90d9\" fill-opacity=\"0.35\" stroke=\"#1f4e8c\" stroke-width=\"1.5\" />\n",
        pts);

    for (const auto& c : series.critical_points) {
        if (c.tag == CriticalTag::Zero) continue;
        const double cx = px(c.x), cy = py(c.value);
        out += fmt::format("<line x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" stroke=\"#c0392b\" />\n", cx,
                           cy - 4, cx, cy + 4);
        const double ty = shown(c.value) >= 0 ? cy - 6 : cy + 14;
        out += fmt::format(
            "<text x=\"{:.3f}\" y=\"{:.3f}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" "
            "class=\"{}\">{:.6g}</text>\n",
            cx, ty, critical_tag_name(c.tag), c.value);
    }

    out += fmt::format(
        "<text x=\"{:.3f}\" y=\"{:.3f}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">x [{}]"
        "</text>\n",
        ml + pw / 2, H - 12, xml_escape(options.length_label));
    out += fmt::format(
        "<text x=\"16\" y=\"{:.3f}\" font-family=\"sans-serif\" font-size=\"12\" "
        "transform=\"rotate(-90 16 {:.3f})\" text-anchor=\"middle\">{} [{}]</text>\n",
        mt + ph / 2, mt + ph / 2, diagram_symbol(series.kind), xml_escape(series.unit_label));
    out += "</svg>\n";
    return out;
}

std::string serialize_series(const DiagramSeries& series) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["kind"] = diagram_kind_name(series.kind);
    doc["unit"] = series.unit_label;
    auto points = ordered_json::array();
    for (const auto& p : series.points) points.push_back(ordered_json::array({p.x, p.value}));
    doc["points"] = std::move(points);
    auto critical = ordered_json::array();
    for (const auto& c : series.critical_points) {
        critical.push_back({{"x", c.x}, {"value", c.value}, {"tag", critical_tag_name(c.tag)}});
    }
    doc["critical"] = std::move(critical);
    return doc.dump();
}

std::string summary_text(const BeamSolution& s) {
    std::string out;
    out += fmt::format("Beam length: {} {}\n", s.length(), s.spec.units.length);
    out += fmt::format("Supports: {}, point loads: {}, distributed loads: {}, moments: {}\n", s.spec.supports.size(),
                       s.spec.point_loads.size(), s.spec.distributed_loads.size(), s.spec.moments.size());
    if (s.ei_normalized) {
        out += "Flexural rigidity: EI = 1 (normalized)\n";
    } else {
        out += fmt::format("Flexural rigidity: EI = {}\n", s.ei);
    }
    out += fmt::format("Reactions [{}] (force up positive, moment ccw positive):\n", s.spec.units.force);
    for (const auto& r : s.reactions) {
        out += fmt::format("R[{}] = {:.6f} ({})\n", r.support, std::abs(r.force), r.force < 0 ? "down" : "up");
    }
    for (const auto& r : s.reactions) {
        if (r.moment) {
            out += fmt::format("M_r[{}] = {:.6f} ({})\n", r.support, std::abs(*r.moment), *r.moment < 0 ? "cw" : "ccw");
        }
    }
    out += "Extrema:\n";
    for (DiagramKind kind : {DiagramKind::Shear, DiagramKind::Moment, DiagramKind::Deflection}) {
        const auto critical = find_extrema(s, kind);
        const CriticalPoint* mx = nullptr;
        const CriticalPoint* mn = nullptr;
        for (const auto& c : critical) {
            if (c.tag == CriticalTag::Max) mx = &c;
            if (c.tag == CriticalTag::Min) mn = &c;
        }
        out += fmt::format("{} [{}]: max {:.9g} at x = {:.6f}; min {:.9g} at x = {:.6f}\n", diagram_kind_name(kind),
                           diagram_unit(s, kind), mx->value, mx->x, mn->value, mn->x);
    }
    if (s.ei_normalized) {
        out += "Note: no section properties given; deflection shown as EI·y\n";
    }
    return out;
}

}  // namespace pbs
