#include "pbs/quantity.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <regex>

#include "pbs/error.hpp"

namespace pbs {

namespace {

constexpr std::array<std::string_view, 5> kForceUnits{"N", "kN", "kg", "lb", "kip"};
constexpr std::array<std::string_view, 5> kLengthUnits{"m", "cm", "mm", "ft", "in"};
constexpr std::array<std::string_view, 3> kLeverUnits{"m", "cm", "ft"};
constexpr std::array<std::string_view, 4> kProductMarks{"·", "-", "*", "."};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& set, std::string_view s) {
    for (auto v : set) {
        if (v == s) return true;
    }
    return false;
}

std::string_view trim(std::string_view s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
    return s;
}

struct Classified {
    QuantityKind kind;
    std::string force;
};

std::optional<Classified> classify(std::string_view unit) {
    if (contains(kForceUnits, unit)) {
        return Classified{QuantityKind::Force, std::string(unit)};
    }
    if (contains(kLengthUnits, unit)) {
        return Classified{QuantityKind::Length, {}};
    }
    if (auto slash = unit.find('/'); slash != std::string_view::npos) {
        auto force = unit.substr(0, slash);
        auto lever = unit.substr(slash + 1);
        if (contains(kForceUnits, force) && contains(kLeverUnits, lever)) {
            return Classified{QuantityKind::DistributedIntensity, std::string(force)};
        }
        return std::nullopt;
    }
    for (auto mark : kProductMarks) {
        auto at = unit.find(mark);
        if (at == std::string_view::npos) continue;
        auto force = unit.substr(0, at);
        auto lever = unit.substr(at + mark.size());
        if (contains(kForceUnits, force) && contains(kLeverUnits, lever)) {
            return Classified{QuantityKind::Moment, std::string(force)};
        }
    }
    return std::nullopt;
}

const std::regex& number_pattern() {
    static const std::regex re(R"([+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)");
    return re;
}

const std::regex& label_pattern() {
    static const std::regex re(R"([A-Za-z_]+\s*[=:])");
    return re;
}

}  // namespace

std::string_view quantity_kind_name(QuantityKind kind) noexcept {
    switch (kind) {
        case QuantityKind::Force: return "force";
        case QuantityKind::DistributedIntensity: return "distributed_intensity";
        case QuantityKind::Moment: return "moment";
        case QuantityKind::Length: return "length";
    }
    return "length";
}

Quantity parse_annotation_text(std::string_view raw) {
    // U+2212 MINUS SIGN shows up in transcriptions of handwritten negatives.
    const std::string text = replace_all(std::string(raw), "−", "-");

    auto begin = std::sregex_iterator(text.begin(), text.end(), number_pattern());
    auto end = std::sregex_iterator();
    const auto count = std::distance(begin, end);
    if (count == 0) {
        throw Error(ErrorCode::NoNumber, "no number in '" + std::string(raw) + "'");
    }
    if (count > 1) {
        throw Error(ErrorCode::Ambiguous, "more than one number in '" + std::string(raw) + "'");
    }
    const std::smatch& m = *begin;

    const std::string prefix(trim(std::string_view(text).substr(0, static_cast<std::size_t>(m.position(0)))));
    if (!prefix.empty() && !std::regex_match(prefix, label_pattern())) {
        throw Error(ErrorCode::UnknownUnit, "unexpected text '" + prefix + "' before the number");
    }

    Quantity q;
    q.value = std::strtod(m.str(0).c_str(), nullptr);
    if (!std::isfinite(q.value)) {
        throw Error(ErrorCode::NoNumber, "number out of range in '" + std::string(raw) + "'");
    }
    q.unit_label = std::string(trim(std::string_view(text).substr(static_cast<std::size_t>(m.position(0) + m.length(0)))));
    auto cls = classify(q.unit_label);
    if (!cls) {
        throw Error(ErrorCode::UnknownUnit, "unit '" + q.unit_label + "' is not recognised");
    }
    q.kind = cls->kind;
    return q;
}

std::string force_label_of(const Quantity& q) {
    auto cls = classify(q.unit_label);
    return cls ? cls->force : std::string{};
}

}  // namespace pbs
