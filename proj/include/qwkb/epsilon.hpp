#pragma once

#include <memory>
#include <optional>

#include "qwkb/charpoly.hpp"

namespace qwkb {

/// The equation sum_j a_j(k*eps, eps) psi((k+j)*eps, eps) = 0 on an interval I.
///
/// Two sources: the substitution q = exp(2*pi*i*eps), Q = exp(2*pi*i*x) applied
/// to a QOperator, or direct closed-form coefficients given as exact rational
/// functions of (x, eps). Both keep the epsilon-derivative at eps = 0 exact.
class EpsilonEquation {
public:
    static EpsilonEquation from_operator(QOperator op, double x_lo, double x_hi);
    /// coeffs[j] is a_j as a rational function with x in the first slot and
    /// eps in the second.
    static EpsilonEquation direct(std::vector<RatFunc> coeffs, double x_lo, double x_hi);

    int degree() const { return d_; }
    double x_lo() const { return x_lo_; }
    double x_hi() const { return x_hi_; }
    bool from_op() const { return op_.has_value(); }
    const QOperator& op() const { return *op_; }

    EvalResult coeff(int j, double x, double eps) const;
    /// All coefficients; throws SingularEvaluation when any is singular.
    std::vector<Complex> coeffs_at(double x, double eps) const;

    /// Characteristic-polynomial coefficients a_j(x, 0); circle-parametrized in
    /// v = exp(2*pi*i*x) for operator-derived equations, interval otherwise.
    CharPoly char_poly() const;

    /// P_eps(x, lambda) = sum_j (d/d eps) a_j(x, 0) lambda^j, exact.
    Complex P_eps(double x, Complex lambda) const;

    /// Taylor coefficients of a_j(x, eps) in eps through order s_max at fixed x.
    std::vector<Complex> coeff_eps_series(int j, double x, int s_max) const;

private:
    EpsilonEquation() = default;
    int d_ = 0;
    double x_lo_ = 0.0, x_hi_ = 1.0;
    std::optional<QOperator> op_;
    std::vector<RatFunc> direct_; // empty when operator-derived
};

} // namespace qwkb
