#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace pbs {

// Coefficient of a Macaulay term: either a plain number, or a number times
// one of the solver's unknowns (referenced by index into the unknown list).
struct Coefficient {
    double scale = 0.0;
    std::optional<std::size_t> unknown;

    bool resolved() const noexcept { return !unknown.has_value(); }
    bool operator==(const Coefficient&) const = default;
};

// c * <x - a>^n with n in [-2, 5].
//   n = -2  unit doublet (concentrated moment)
//   n = -1  Dirac delta (concentrated force)
//   n >= 0  (x - a)^n for x >= a, zero otherwise
struct SingularityTerm {
    Coefficient coeff;
    double offset = 0.0;
    int exponent = 0;

    static SingularityTerm constant(double c, double a, int n) { return {{c, std::nullopt}, a, n}; }
    static SingularityTerm symbolic(double c, std::size_t unknown, double a, int n) { return {{c, unknown}, a, n}; }

    bool operator==(const SingularityTerm&) const = default;
};

inline constexpr int kMinExponent = -2;
inline constexpr int kMaxExponent = 5;

// Integrates every term once from 0:
//   n < 0   c<x-a>^n -> c<x-a>^(n+1)
//   n >= 0  c<x-a>^n -> c/(n+1) <x-a>^(n+1)
std::vector<SingularityTerm> integrate_terms(std::span<const SingularityTerm> terms);

// Value at x with the left-closed step convention (<0>^0 = 1). Terms with a
// negative exponent contribute nothing. Throws UnresolvedUnknown when a term
// still references an unknown.
double evaluate_terms(std::span<const SingularityTerm> terms, double x);

// Limit from the left at x: only terms with offset strictly below x count.
double evaluate_terms_left(std::span<const SingularityTerm> terms, double x);

// Size of the discontinuity at x: sum of coefficients of step (n = 0) terms
// sitting exactly at x.
double jump_at(std::span<const SingularityTerm> terms, double x);

// Linear form of the value at x: constant part plus one coefficient per
// unknown, so that value = constant + sum(row[k] * unknown[k]).
struct LinearForm {
    std::vector<double> row;
    double constant = 0.0;
};
LinearForm linear_form_at(std::span<const SingularityTerm> terms, double x, std::size_t unknown_count);

// Replaces unknown references by their solved values, merges terms sharing
// (offset, exponent) and orders the result by (offset, exponent).
std::vector<SingularityTerm> resolve_terms(std::span<const SingularityTerm> terms, std::span<const double> values);

}  // namespace pbs
