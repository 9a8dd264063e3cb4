#pragma once

#include <string>
#include <string_view>

namespace pbs {

enum class QuantityKind { Force, DistributedIntensity, Moment, Length };

std::string_view quantity_kind_name(QuantityKind kind) noexcept;

struct Quantity {
    double value = 0.0;
    std::string unit_label;  // as written, e.g. "kg·cm"
    QuantityKind kind = QuantityKind::Length;

    bool operator==(const Quantity&) const = default;
};

// Parses handwriting transcriptions of the form "<number> <unit>", optionally
// preceded by a label such as "P =" or "L:". Units:
//   force      N kN kg lb kip
//   intensity  <force>/m <force>/cm <force>/ft
//   moment     <force>·m <force>·cm <force>·ft  (product mark one of · - * .)
//   length     m cm mm ft in
// Throws pbs::Error with NoNumber, UnknownUnit or Ambiguous.
Quantity parse_annotation_text(std::string_view text);

// Force part of a force/intensity/moment label ("kN/m" -> "kN").
std::string force_label_of(const Quantity& q);

}  // namespace pbs
