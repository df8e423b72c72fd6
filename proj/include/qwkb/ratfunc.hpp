#pragma once

#include <stdexcept>
#include <string>

#include "qwkb/bipoly.hpp"

namespace qwkb {

struct SingularEvaluation : std::runtime_error {
    SingularEvaluation(const std::string& what, Complex at_Q, Complex at_q)
        : std::runtime_error(what), Q(at_Q), q(at_q) {}
    Complex Q, q;
};

/// Result of a guarded evaluation: value plus a singularity flag.
struct EvalResult {
    Complex value{0.0, 0.0};
    bool singular = false;
};

/// Scale-aware singularity guard: |den| < tol * (1 + |num|).
inline constexpr double kSingularRelTol = 1e-13;

/// Exact rational function num/den in (Q, q). Denominator never the zero polynomial.
/// normalize() removes the common monomial factor and fixes the sign of the
/// denominator's leading term; it is idempotent. Equality is by cross-multiplication.
class RatFunc {
public:
    RatFunc() : num_(), den_(BiPoly::constant(1)) {}
    RatFunc(BiPoly num, BiPoly den);
    static RatFunc constant(const Rational& c) { return RatFunc(BiPoly::constant(c), BiPoly::constant(1)); }
    static RatFunc from_poly(BiPoly p) { return RatFunc(std::move(p), BiPoly::constant(1)); }

    const BiPoly& num() const { return num_; }
    const BiPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }

    RatFunc operator-() const;
    RatFunc operator+(const RatFunc& o) const;
    RatFunc operator-(const RatFunc& o) const;
    RatFunc operator*(const RatFunc& o) const;
    RatFunc operator/(const RatFunc& o) const;
    RatFunc inverse() const;
    RatFunc pow(std::int64_t n) const; // any integer; negative inverts

    /// Cross-multiplication equality: n1*d2 == n2*d1.
    bool equals(const RatFunc& o) const;

    /// Substitute Q -> q^shift * Q.
    RatFunc shift_Q_by_q(std::int64_t shift) const;

    /// Partial derivative (quotient rule), exact.
    RatFunc d_dQ() const;
    RatFunc d_dq() const;

    /// Guarded evaluation at (Q, q).
    EvalResult eval(Complex Q, Complex q) const;
    /// Throwing variant.
    Complex eval_or_throw(Complex Q, Complex q) const;

    std::string to_string(const char* vQ = "Q", const char* vq = "q") const;

private:
    void normalize();
    BiPoly num_, den_;
};

} // namespace qwkb
