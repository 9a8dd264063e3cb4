#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Dense>
#include <fmt/format.h>

namespace pbs::testing {

BeamSpec make_spec(double length, std::vector<Support> supports, std::vector<PointLoad> point_loads,
                   std::vector<DistributedLoad> distributed_loads, std::vector<AppliedMoment> moments) {
    BeamSpec s;
    s.length = length;
    s.supports = std::move(supports);
    s.point_loads = std::move(point_loads);
    s.distributed_loads = std::move(distributed_loads);
    s.moments = std::move(moments);
    return s;
}

StiffnessResult stiffness_oracle(const BeamSpec& spec) {
    // Extended precision: short elements make K badly conditioned.
    using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    std::set<double> xs{0.0, spec.length};
    for (const auto& s : spec.supports) xs.insert(s.position);
    for (const auto& p : spec.point_loads) xs.insert(p.position);
    for (const auto& m : spec.moments) xs.insert(m.position);
    for (const auto& d : spec.distributed_loads) {
        xs.insert(d.start);
        xs.insert(d.end);
    }
    const std::vector<double> nodes(xs.begin(), xs.end());
    const auto node_of = [&](double x) {
        return static_cast<Eigen::Index>(std::lower_bound(nodes.begin(), nodes.end(), x) - nodes.begin());
    };
    const Eigen::Index n = static_cast<Eigen::Index>(nodes.size()) * 2;
    Mat K = Mat::Zero(n, n);
    Vec F = Vec::Zero(n);

    for (std::size_t e = 0; e + 1 < nodes.size(); ++e) {
        const long double h = static_cast<long double>(nodes[e + 1]) - nodes[e];
        Eigen::Matrix<long double, 4, 4> k;
        k << 12, 6 * h, -12, 6 * h,
             6 * h, 4 * h * h, -6 * h, 2 * h * h,
             -12, -6 * h, 12, -6 * h,
             6 * h, 2 * h * h, -6 * h, 4 * h * h;
        k /= h * h * h;
        const Eigen::Index base = static_cast<Eigen::Index>(e) * 2;
        K.block<4, 4>(base, base) += k;

        // Consistent nodal loads of a linearly varying upward load q1 -> q2.
        long double q1 = 0.0L, q2 = 0.0L;
        for (const auto& d : spec.distributed_loads) {
            if (nodes[e] < d.start || nodes[e + 1] > d.end) continue;
            const long double slope =
                (static_cast<long double>(d.end_intensity) - d.start_intensity) / (static_cast<long double>(d.end) - d.start);
            q1 -= d.start_intensity + slope * (static_cast<long double>(nodes[e]) - d.start);
            q2 -= d.start_intensity + slope * (static_cast<long double>(nodes[e + 1]) - d.start);
        }
        F(base + 0) += h * (21 * q1 + 9 * q2) / 60.0L;
        F(base + 1) += h * h * (3 * q1 + 2 * q2) / 60.0L;
        F(base + 2) += h * (9 * q1 + 21 * q2) / 60.0L;
        F(base + 3) -= h * h * (2 * q1 + 3 * q2) / 60.0L;
    }
    for (const auto& p : spec.point_loads) F(2 * node_of(p.position)) -= p.magnitude;
    for (const auto& m : spec.moments) F(2 * node_of(m.position) + 1) += m.magnitude;

    std::vector<bool> constrained(static_cast<std::size_t>(n), false);
    for (const auto& s : spec.supports) {
        const Eigen::Index i = node_of(s.position);
        constrained[static_cast<std::size_t>(2 * i)] = true;
        if (s.kind == SupportKind::Fixed) constrained[static_cast<std::size_t>(2 * i + 1)] = true;
    }
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!constrained[static_cast<std::size_t>(i)]) free.push_back(i);
    }
    const Eigen::Index nf = static_cast<Eigen::Index>(free.size());
    Mat Kff(nf, nf);
    Vec Ff(nf);
    for (Eigen::Index r = 0; r < nf; ++r) {
        Ff(r) = F(free[r]);
        for (Eigen::Index c = 0; c < nf; ++c) Kff(r, c) = K(free[r], free[c]);
    }
    Vec u = Vec::Zero(n);
    if (nf > 0) {
        const Vec uf = Kff.fullPivLu().solve(Ff);
        for (Eigen::Index r = 0; r < nf; ++r) u(free[r]) = uf(r);
    }
    const Vec reaction = K * u - F;

    StiffnessResult out;
    for (const auto& s : spec.supports) {
        const Eigen::Index i = node_of(s.position);
        out.forces.push_back(static_cast<double>(reaction(2 * i)));
        out.moments.push_back(s.kind == SupportKind::Fixed ? std::optional<double>(static_cast<double>(reaction(2 * i + 1)))
                                                           : std::nullopt);
    }
    out.node_x = nodes;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        out.node_ei_deflection.push_back(static_cast<double>(u(static_cast<Eigen::Index>(2 * i))));
        out.node_ei_slope.push_back(static_cast<double>(u(static_cast<Eigen::Index>(2 * i + 1))));
    }
    return out;
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int pick(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double signed_magnitude(std::mt19937_64& rng, double lo, double hi) {
    const double v = uniform(rng, lo, hi);
    return pick(rng, 0, 4) == 0 ? -v : v;
}

// Distinct positions in [0, L] at least min_gap apart, plus the given ones.
std::vector<double> spread_positions(std::mt19937_64& rng, double L, int count, double min_gap) {
    std::vector<double> out;
    for (int tries = 0; static_cast<int>(out.size()) < count && tries < 1000; ++tries) {
        const double x = uniform(rng, 0.0, L);
        const bool clear = std::all_of(out.begin(), out.end(), [&](double y) { return std::abs(x - y) >= min_gap; });
        if (clear) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

BeamSpec random_beam(std::mt19937_64& rng) {
    BeamSpec s;
    s.length = uniform(rng, 1.0, 20.0);
    const double L = s.length;
    switch (pick(rng, 0, 6)) {
        case 0:  // simply supported
            s.supports = {{SupportKind::Simple, 0.0}, {SupportKind::Roller, L}};
            break;
        case 1: {  // overhangs on one or both sides
            auto p = spread_positions(rng, L, 2, 0.2 * L);
            s.supports = {{SupportKind::Simple, p[0]}, {SupportKind::Roller, p[1]}};
            break;
        }
        case 2:  // cantilever
            s.supports = {{SupportKind::Fixed, pick(rng, 0, 1) ? L : 0.0}};
            break;
        case 3: {  // propped cantilever, prop anywhere
            const double prop = uniform(rng, 0.3 * L, L);
            s.supports = {{SupportKind::Fixed, 0.0}, {SupportKind::Roller, prop}};
            break;
        }
        case 4:  // fixed-fixed
            s.supports = {{SupportKind::Fixed, 0.0}, {SupportKind::Fixed, L}};
            break;
        case 5: {  // continuous over 3-4 supports
            auto p = spread_positions(rng, L, pick(rng, 3, 4), 0.15 * L);
            for (std::size_t i = 0; i < p.size(); ++i) {
                s.supports.push_back({i == 0 ? SupportKind::Simple : SupportKind::Roller, p[i]});
            }
            break;
        }
        default: {  // fixed end plus interior supports
            s.supports.push_back({SupportKind::Fixed, L});
            for (double x : spread_positions(rng, 0.8 * L, pick(rng, 1, 2), 0.15 * L)) {
                s.supports.push_back({SupportKind::Roller, x});
            }
            std::sort(s.supports.begin(), s.supports.end(),
                      [](const Support& a, const Support& b) { return a.position < b.position; });
            break;
        }
    }
    for (int i = pick(rng, 1, 3); i > 0; --i) {
        s.point_loads.push_back({signed_magnitude(rng, 0.5, 100.0), uniform(rng, 0.0, L)});
    }
    for (int i = pick(rng, 0, 2); i > 0; --i) {
        double a = uniform(rng, 0.0, L), b = uniform(rng, 0.0, L);
        if (a > b) std::swap(a, b);
        if (b - a < 0.05 * L) continue;
        double w1 = signed_magnitude(rng, 0.5, 20.0), w2 = signed_magnitude(rng, 0.5, 20.0);
        if (pick(rng, 0, 3) == 0) w1 = 0.0;
        s.distributed_loads.push_back({a, b, w1, w2});
    }
    for (int i = pick(rng, 0, 2); i > 0; --i) {
        s.moments.push_back({signed_magnitude(rng, 0.5, 50.0), uniform(rng, 0.0, L)});
    }
    // Snap to an L/512 grid so the stiffness oracle never sees near-zero
    // element lengths.
    const auto snap = [L](double& x) { x = std::round(x / L * 512.0) * L / 512.0; };
    for (auto& p : s.supports) snap(p.position);
    for (auto& p : s.point_loads) snap(p.position);
    for (auto& m : s.moments) snap(m.position);
    for (auto& d : s.distributed_loads) {
        snap(d.start);
        snap(d.end);
    }
    return s;
}

BeamSpec random_drawable_beam(std::mt19937_64& rng) {
    constexpr int kGrid = 8;
    BeamSpec s;
    s.length = 0.5 * pick(rng, 4, 40);
    const double L = s.length;
    const auto at = [&](int i) { return L * i / kGrid; };
    bool end_covered = true;
    switch (pick(rng, 0, 4)) {
        case 0:
            s.supports = {{SupportKind::Simple, 0.0}, {SupportKind::Roller, L}};
            break;
        case 1:
            s.supports = {{SupportKind::Fixed, 0.0}};
            end_covered = false;
            break;
        case 2:
            s.supports = {{SupportKind::Fixed, 0.0}, {SupportKind::Roller, L}};
            break;
        case 3:
            s.supports = {{SupportKind::Fixed, 0.0}, {SupportKind::Fixed, L}};
            break;
        default:
            s.supports = {{SupportKind::Simple, 0.0}, {SupportKind::Roller, at(pick(rng, 2, 6))},
                          {SupportKind::Roller, L}};
            break;
    }
    std::set<int> load_slots;
    if (!end_covered) load_slots.insert(kGrid);
    for (int i = pick(rng, 1, 3); i > 0; --i) load_slots.insert(pick(rng, 1, kGrid));
    for (int slot : load_slots) {
        double p = 0.25 * pick(rng, 4, 800);
        if (pick(rng, 0, 5) == 0) p = -p;
        s.point_loads.push_back({p, at(slot)});
    }
    if (pick(rng, 0, 1)) {
        int a = pick(rng, 0, kGrid - 1), b = pick(rng, a + 1, kGrid);
        const double w = 0.5 * pick(rng, 1, 40);
        s.distributed_loads.push_back({at(a), at(b), w, w});
    }
    if (pick(rng, 0, 2) == 0) {
        const double m = pick(rng, 0, 1) ? 5.0 * pick(rng, 1, 20) : -5.0 * pick(rng, 1, 20);
        s.moments.push_back({m, at(pick(rng, 1, kGrid - 1))});
    }
    return s;
}

std::string shortest(double v) {
    return fmt::format("{}", v);
}

DetectionSet render_detections(const BeamSpec& spec, bool segment_chain) {
    constexpr double x0 = 0.1, x1 = 0.9, y = 0.5;
    const double L = spec.length;
    const auto cx_of = [&](double pos) { return x0 + (x1 - x0) * pos / L; };

    DetectionSet ds;
    ds.image = {1280, 720};
    const auto add = [&](DetectionClass k, BBox b) { ds.detections.push_back({k, b, 0.9}); };
    const auto note = [&](BBox anchor, const std::string& text) {
        ds.annotations.push_back({{anchor.cx, anchor.top() - 0.03, 0.06, 0.03}, text});
    };
    const std::string& F = spec.units.force;

    for (const auto& s : spec.supports) {
        const DetectionClass k = s.kind == SupportKind::Fixed    ? DetectionClass::Fixed
                                 : s.kind == SupportKind::Roller ? DetectionClass::Roller
                                                                 : DetectionClass::Simple;
        add(k, {cx_of(s.position), y + 0.04, 0.04, 0.08});
    }
    for (const auto& p : spec.point_loads) {
        const BBox b{cx_of(p.position), y - 0.06, 0.02, 0.12};
        add(DetectionClass::PointLoad, b);
        note(b, shortest(p.magnitude) + " " + F);
    }
    for (const auto& d : spec.distributed_loads) {
        const double a = cx_of(d.start), b = cx_of(d.end);
        const BBox box{(a + b) / 2.0, y - 0.04, b - a, 0.08};
        add(DetectionClass::DistributedLoad, box);
        note(box, shortest(d.start_intensity) + " " + F + "/" + spec.units.length);
    }
    for (const auto& m : spec.moments) {
        const BBox b{cx_of(m.position), y, 0.05, 0.05};
        add(DetectionClass::Moment, b);
        note({b.cx, y - 0.2, 0.05, 0.05}, shortest(m.magnitude) + " " + F + "·" + spec.units.length);
    }

    if (!segment_chain) {
        ds.annotations.push_back({{0.5, 0.75, 0.08, 0.04}, shortest(L) + " " + spec.units.length});
        return ds;
    }
    std::set<double> xs;
    for (const auto& s : spec.supports) xs.insert(s.position);
    for (const auto& p : spec.point_loads) xs.insert(p.position);
    for (const auto& m : spec.moments) xs.insert(m.position);
    for (const auto& d : spec.distributed_loads) {
        xs.insert(d.start);
        xs.insert(d.end);
    }
    const std::vector<double> v(xs.begin(), xs.end());
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double mid = (cx_of(v[i]) + cx_of(v[i + 1])) / 2.0;
        ds.annotations.push_back({{mid, 0.75, 0.04, 0.04}, shortest(v[i + 1] - v[i]) + " " + spec.units.length});
    }
    return ds;
}

std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

TempDir::TempDir(const std::string& tag) {
    static std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / fmt::format("pbs-{}-{:016x}", tag, std::uniform_int_distribution<std::uint64_t>()(rd));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

}  // namespace pbs::testing
