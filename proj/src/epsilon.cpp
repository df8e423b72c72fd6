#include "qwkb/epsilon.hpp"

#include <cmath>
#include <stdexcept>

namespace qwkb {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Keep only the eps^0 part of a polynomial in (x, eps); negative eps
/// exponents are rejected.
BiPoly eps_zero_part(const BiPoly& p) {
    BiPoly out;
    for (const auto& [e, c] : p.terms()) {
        if (e.second < 0) throw std::runtime_error("coefficient has a pole at eps = 0");
        if (e.second == 0) out = out + BiPoly::monomial(c, e.first, 0);
    }
    return out;
}

/// Series of a polynomial in (x, eps) around eps = 0 at fixed x.
std::vector<Complex> poly_eps_series(const BiPoly& p, double x, int s_max) {
    std::vector<Complex> out(s_max + 1, Complex(0.0, 0.0));
    for (const auto& [e, c] : p.terms()) {
        if (e.second < 0) throw std::runtime_error("pole at eps = 0");
        if (e.second <= s_max)
            out[e.second] += to_double(c) * cpow_int(Complex(x, 0.0), e.first);
    }
    return out;
}

/// Series of b(Q = exp(2 pi i x), q = exp(2 pi i eps)) around eps = 0:
/// each monomial Q^a q^b contributes v^a * (2 pi i b)^t / t! at order t.
std::vector<Complex> op_eps_series(const BiPoly& p, double x, int s_max) {
    std::vector<Complex> out(s_max + 1, Complex(0.0, 0.0));
    Complex v = std::polar(1.0, kTwoPi * x);
    for (const auto& [e, c] : p.terms()) {
        Complex base = to_double(c) * cpow_int(v, e.first);
        Complex rate(0.0, kTwoPi * static_cast<double>(e.second));
        Complex pw(1.0, 0.0);
        double fact = 1.0;
        for (int t = 0; t <= s_max; ++t) {
            out[t] += base * pw / fact;
            pw *= rate;
            fact *= (t + 1);
        }
    }
    return out;
}

/// Truncated series division num/den (den[0] != 0).
std::vector<Complex> series_div(const std::vector<Complex>& num, const std::vector<Complex>& den) {
    const int n = static_cast<int>(num.size());
    if (std::abs(den[0]) < 1e-300) throw std::runtime_error("series division by eps-vanishing denominator");
    std::vector<Complex> out(n);
    for (int t = 0; t < n; ++t) {
        Complex acc = num[t];
        for (int k = 1; k <= t; ++k) acc -= den[k] * out[t - k];
        out[t] = acc / den[0];
    }
    return out;
}

} // namespace

EpsilonEquation EpsilonEquation::from_operator(QOperator op, double x_lo, double x_hi) {
    if (!(x_hi > x_lo)) throw std::invalid_argument("empty interval");
    EpsilonEquation eq;
    eq.d_ = op.degree();
    eq.x_lo_ = x_lo;
    eq.x_hi_ = x_hi;
    eq.op_ = std::move(op);
    return eq;
}

EpsilonEquation EpsilonEquation::direct(std::vector<RatFunc> coeffs, double x_lo, double x_hi) {
    if (!(x_hi > x_lo)) throw std::invalid_argument("empty interval");
    while (coeffs.size() > 1 && coeffs.back().is_zero()) coeffs.pop_back();
    if (coeffs.size() < 2) throw std::invalid_argument("epsilon equation needs degree >= 1");
    EpsilonEquation eq;
    eq.d_ = static_cast<int>(coeffs.size()) - 1;
    eq.x_lo_ = x_lo;
    eq.x_hi_ = x_hi;
    eq.direct_ = std::move(coeffs);
    return eq;
}

EvalResult EpsilonEquation::coeff(int j, double x, double eps) const {
    if (from_op()) {
        Complex Q = std::polar(1.0, kTwoPi * x);
        Complex q = std::polar(1.0, kTwoPi * eps);
        return op_->eval_coefficient(j, Q, q);
    }
    return direct_.at(j).eval(Complex(x, 0.0), Complex(eps, 0.0));
}

std::vector<Complex> EpsilonEquation::coeffs_at(double x, double eps) const {
    std::vector<Complex> out(d_ + 1);
    for (int j = 0; j <= d_; ++j) {
        EvalResult r = coeff(j, x, eps);
        if (r.singular)
            throw SingularEvaluation("coefficient singular at (x, eps) = (" + std::to_string(x) +
                                         ", " + std::to_string(eps) + ")",
                                     Complex(x, 0.0), Complex(eps, 0.0));
        out[j] = r.value;
    }
    return out;
}

CharPoly EpsilonEquation::char_poly() const {
    if (from_op()) {
        ClassicalSpecialization s = specialize_classical(*op_);
        return CharPoly(std::move(s.coeffs), Parametrization{Parametrization::Kind::Circle, x_lo_, x_hi_});
    }
    std::vector<RatFunc> cs;
    cs.reserve(direct_.size());
    for (const auto& a : direct_) {
        BiPoly num0 = eps_zero_part(a.num());
        BiPoly den0 = eps_zero_part(a.den());
        if (den0.is_zero())
            throw std::runtime_error("coefficient denominator vanishes identically at eps = 0");
        cs.emplace_back(std::move(num0), std::move(den0));
    }
    return CharPoly(std::move(cs), Parametrization::interval(x_lo_, x_hi_));
}

Complex EpsilonEquation::P_eps(double x, Complex lambda) const {
    Complex acc(0.0, 0.0);
    Complex lpow(1.0, 0.0);
    for (int j = 0; j <= d_; ++j) {
        std::vector<Complex> s = coeff_eps_series(j, x, 1);
        acc += s[1] * lpow;
        lpow *= lambda;
    }
    return acc;
}

std::vector<Complex> EpsilonEquation::coeff_eps_series(int j, double x, int s_max) const {
    if (from_op()) {
        const RatFunc& b = op_->coeff(j);
        return series_div(op_eps_series(b.num(), x, s_max), op_eps_series(b.den(), x, s_max));
    }
    const RatFunc& a = direct_.at(j);
    return series_div(poly_eps_series(a.num(), x, s_max), poly_eps_series(a.den(), x, s_max));
}

} // namespace qwkb
