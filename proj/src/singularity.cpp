#include "pbs/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "pbs/error.hpp"

namespace pbs {

namespace {

double basis(double x, double a, int n) {
    if (n < 0 || x < a) {
        return 0.0;
    }
    if (n == 0) {
        return 1.0;
    }
    const double d = x - a;
    double v = d;
    for (int k = 1; k < n; ++k) {
        v *= d;
    }
    return v;
}

}  // namespace

std::vector<SingularityTerm> integrate_terms(std::span<const SingularityTerm> terms) {
    std::vector<SingularityTerm> out;
    out.reserve(terms.size());
    for (SingularityTerm t : terms) {
        if (t.exponent >= 0) {
            t.coeff.scale /= static_cast<double>(t.exponent + 1);
        }
        t.exponent += 1;
        out.push_back(t);
    }
    return out;
}

double evaluate_terms(std::span<const SingularityTerm> terms, double x) {
    double sum = 0.0;
    for (const auto& t : terms) {
        if (!t.coeff.resolved()) {
            throw Error(ErrorCode::UnresolvedUnknown, "term references an unsolved unknown");
        }
        sum += t.coeff.scale * basis(x, t.offset, t.exponent);
    }
    return sum;
}

double evaluate_terms_left(std::span<const SingularityTerm> terms, double x) {
    double sum = 0.0;
    for (const auto& t : terms) {
        if (!t.coeff.resolved()) {
            throw Error(ErrorCode::UnresolvedUnknown, "term references an unsolved unknown");
        }
        if (t.offset < x) {
            sum += t.coeff.scale * basis(x, t.offset, t.exponent);
        }
    }
    return sum;
}

double jump_at(std::span<const SingularityTerm> terms, double x) {
    double sum = 0.0;
    for (const auto& t : terms) {
        if (t.exponent == 0 && t.offset == x) {
            sum += t.coeff.scale;
        }
    }
    return sum;
}

LinearForm linear_form_at(std::span<const SingularityTerm> terms, double x, std::size_t unknown_count) {
    LinearForm form;
    form.row.assign(unknown_count, 0.0);
    for (const auto& t : terms) {
        const double b = t.coeff.scale * basis(x, t.offset, t.exponent);
        if (t.coeff.unknown) {
            form.row.at(*t.coeff.unknown) += b;
        } else {
            form.constant += b;
        }
    }
    return form;
}

std::vector<SingularityTerm> resolve_terms(std::span<const SingularityTerm> terms, std::span<const double> values) {
    std::map<std::pair<double, int>, double> merged;
    for (const auto& t : terms) {
        double c = t.coeff.scale;
        if (t.coeff.unknown) {
            c *= values[*t.coeff.unknown];
        }
        merged[{t.offset, t.exponent}] += c;
    }
    std::vector<SingularityTerm> out;
    out.reserve(merged.size());
    for (const auto& [key, c] : merged) {
        if (c != 0.0) {
            out.push_back(SingularityTerm::constant(c, key.first, key.second));
        }
    }
    return out;
}

}  // namespace pbs
