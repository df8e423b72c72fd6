#pragma once

#include <string>
#include <vector>

#include "qwkb/ratfunc.hpp"

namespace qwkb {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t position)
        : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"), pos(position) {}
    std::size_t pos;
};

/// A q-difference operator in normal form: sum_j b_j(Q, q) E^j, every E commuted
/// to the right using E Q = q Q E. Coefficients are exact rational functions.
///
/// b_0 may vanish for inputs like "E*Q" (normal form q*Q*E); the regularity
/// analysis downstream reports such operators as irregular via root vanishing.
class QOperator {
public:
    explicit QOperator(std::vector<RatFunc> coeffs);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<RatFunc>& coeffs() const { return coeffs_; }
    const RatFunc& coeff(int j) const { return coeffs_.at(j); }

    /// b_j(Q, q) with the scale-aware singularity guard.
    EvalResult eval_coefficient(int j, Complex Q, Complex q) const;

    /// Normal-form serialization: one "b[j] = <num> / <den>" line per coefficient.
    std::string serialize() const;

    bool equals(const QOperator& o) const;

private:
    std::vector<RatFunc> coeffs_;
};

/// Parse an operator expression (tokens q, Q, E, integer literals, + - * / ^ and
/// parentheses; whitespace and '#' line comments ignored). Also accepts the
/// serialized normal form ("b[j] = ..." lines). E must not appear in denominators.
QOperator parse_operator(const std::string& text);

/// Per-coefficient result of the q = 1 specialization.
struct ClassicalSpecialization {
    std::vector<RatFunc> coeffs;        // univariate in v, trailing entry nonzero
    std::vector<int> dropped;           // indices j whose coefficient vanished at q = 1
};

/// Characteristic-polynomial coefficients c_j(v) = b_j(v, 1). Coefficients that
/// vanish identically at q = 1 are dropped with the degree adjusted; a
/// denominator that vanishes identically at q = 1 is an error naming j.
ClassicalSpecialization specialize_classical(const QOperator& op);

} // namespace qwkb
