#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "qwkb/rational.hpp"

namespace qwkb {

/// Exponent pair (a, b) of a monomial Q^a q^b. Laurent exponents allowed.
using Exponents = std::pair<std::int64_t, std::int64_t>;

/// Exact Laurent polynomial in two commuting variables (Q, q) over the rationals.
/// Invariant: no stored coefficient is zero.
class BiPoly {
public:
    BiPoly() = default;
    static BiPoly constant(const Rational& c);
    static BiPoly monomial(const Rational& c, std::int64_t a, std::int64_t b);
    static BiPoly var_Q() { return monomial(1, 1, 0); }
    static BiPoly var_q() { return monomial(1, 0, 1); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Exponents, Rational>& terms() const { return terms_; }

    BiPoly operator-() const;
    BiPoly operator+(const BiPoly& o) const;
    BiPoly operator-(const BiPoly& o) const;
    BiPoly operator*(const BiPoly& o) const;
    BiPoly pow(std::int64_t n) const; // n >= 0
    bool operator==(const BiPoly& o) const { return terms_ == o.terms_; }

    /// Substitute Q -> q^shift * Q (used to commute E across coefficients).
    BiPoly shift_Q_by_q(std::int64_t shift) const;

    /// Partial derivatives with respect to Q or q (Laurent rule).
    BiPoly d_dQ() const;
    BiPoly d_dq() const;

    /// Exact substitution q = 1; result is univariate in Q (exponent pairs with b = 0).
    BiPoly substitute_q1() const;

    /// Treats the polynomial as univariate in Q (asserts all b exponents are 0).
    bool is_univariate_Q() const;

    Complex eval(Complex Q, Complex q) const;
    /// Evaluate with q fixed to 1 and the first variable = v.
    Complex eval_univariate(Complex v) const;

    /// Divide out the monomial gcd Q^a0 q^b0 (smallest exponents); returns the factor removed.
    Exponents strip_monomial_content();

    /// Smallest/largest exponents present, if any.
    std::optional<Exponents> min_exponents() const;

    /// Render as e.g. "3*Q^2*q^-1 - 7/2*Q + 1", exponents descending in Q then q.
    std::string to_string(const char* vQ = "Q", const char* vq = "q") const;

private:
    void add_term(const Exponents& e, const Rational& c);
    std::map<Exponents, Rational> terms_;
};

} // namespace qwkb
