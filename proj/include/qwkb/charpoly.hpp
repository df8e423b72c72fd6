#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qwkb/operator.hpp"

namespace qwkb {

/// Maps the real tracking parameter t to the coefficient argument v.
struct Parametrization {
    enum class Kind { Circle, HalfAngle, Interval };
    Kind kind = Kind::Circle;
    double lo = 0.0, hi = 1.0;

    static Parametrization circle() { return {Kind::Circle, 0.0, 1.0}; }
    static Parametrization half_angle() { return {Kind::HalfAngle, 0.0, 2.0 * 3.14159265358979323846}; }
    static Parametrization interval(double a, double b) { return {Kind::Interval, a, b}; }

    Complex v_of_t(double t) const;
    /// |d(angle)/dt| for angle-based normalizations; 1 for intervals.
    double angle_rate() const;
    double length() const { return hi - lo; }
    std::string describe() const;
};

/// Evaluated coefficients at one parameter value.
struct CoeffEval {
    std::vector<Complex> c;     // c[0..d]
    bool singular = false;      // some coefficient's denominator vanished
    bool degree_drop = false;   // leading coefficient below threshold
};

/// P(v, lambda) = sum_j c_j(v) lambda^j with exact univariate rational c_j.
class CharPoly {
public:
    CharPoly(std::vector<RatFunc> coeffs, Parametrization param);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<RatFunc>& coeffs() const { return coeffs_; }
    const Parametrization& param() const { return param_; }

    CoeffEval eval_coeffs(double t) const;
    CoeffEval eval_coeffs_v(Complex v) const;

    /// d/dt of every coefficient at t (chain rule through v(t)), exact partials.
    std::vector<Complex> eval_coeff_dt(double t) const;
    /// Second t-derivatives.
    std::vector<Complex> eval_coeff_dtt(double t) const;

    std::string to_string() const;

    static CharPoly from_operator(const QOperator& op, Parametrization p, std::vector<int>* dropped = nullptr);

private:
    std::vector<RatFunc> coeffs_;     // univariate in v (stored in the Q slot)
    std::vector<RatFunc> dcoeffs_;    // d/dv, exact
    std::vector<RatFunc> ddcoeffs_;   // d^2/dv^2, exact
    Parametrization param_;
};

} // namespace qwkb
