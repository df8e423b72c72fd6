#include "qwkb/charpoly.hpp"

#include <cmath>
#include <sstream>

namespace qwkb {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kDegreeDropTol = 1e-12;
} // namespace

Complex Parametrization::v_of_t(double t) const {
    switch (kind) {
        case Kind::Circle: return std::polar(1.0, kTwoPi * t);
        case Kind::HalfAngle: return std::polar(1.0, 0.5 * t);
        case Kind::Interval: return {t, 0.0};
    }
    return {0.0, 0.0};
}

double Parametrization::angle_rate() const {
    switch (kind) {
        case Kind::Circle: return kTwoPi;
        case Kind::HalfAngle: return 0.5;
        case Kind::Interval: return 1.0;
    }
    return 1.0;
}

std::string Parametrization::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Circle: os << "circle: v = exp(2*pi*i*t), t in [" << lo << ", " << hi << "]"; break;
        case Kind::HalfAngle: os << "half-angle: v = exp(i*t/2), t in [" << lo << ", " << hi << "]"; break;
        case Kind::Interval: os << "interval: v = t, t in [" << lo << ", " << hi << "]"; break;
    }
    return os.str();
}

CharPoly::CharPoly(std::vector<RatFunc> coeffs, Parametrization param)
    : coeffs_(std::move(coeffs)), param_(param) {
    while (coeffs_.size() > 1 && coeffs_.back().is_zero()) coeffs_.pop_back();
    if (coeffs_.empty() || coeffs_.back().is_zero())
        throw std::invalid_argument("characteristic polynomial with zero leading coefficient");
    dcoeffs_.reserve(coeffs_.size());
    ddcoeffs_.reserve(coeffs_.size());
    for (const auto& c : coeffs_) {
        dcoeffs_.push_back(c.d_dQ());
        ddcoeffs_.push_back(dcoeffs_.back().d_dQ());
    }
}

CoeffEval CharPoly::eval_coeffs(double t) const { return eval_coeffs_v(param_.v_of_t(t)); }

CoeffEval CharPoly::eval_coeffs_v(Complex v) const {
    CoeffEval out;
    out.c.resize(coeffs_.size());
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        EvalResult r = coeffs_[j].eval(v, {1.0, 0.0});
        if (r.singular) out.singular = true;
        out.c[j] = r.value;
    }
    double scale = 0.0;
    for (const auto& z : out.c) scale = std::max(scale, std::abs(z));
    if (std::abs(out.c.back()) < kDegreeDropTol * scale) out.degree_drop = true;
    return out;
}

std::vector<Complex> CharPoly::eval_coeff_dt(double t) const {
    Complex v = param_.v_of_t(t);
    Complex dv; // dv/dt
    switch (param_.kind) {
        case Parametrization::Kind::Circle: dv = Complex(0.0, kTwoPi) * v; break;
        case Parametrization::Kind::HalfAngle: dv = Complex(0.0, 0.5) * v; break;
        case Parametrization::Kind::Interval: dv = {1.0, 0.0}; break;
    }
    std::vector<Complex> out(coeffs_.size());
    for (std::size_t j = 0; j < coeffs_.size(); ++j)
        out[j] = dcoeffs_[j].eval_or_throw(v, {1.0, 0.0}) * dv;
    return out;
}

std::vector<Complex> CharPoly::eval_coeff_dtt(double t) const {
    Complex v = param_.v_of_t(t);
    Complex dv, ddv;
    switch (param_.kind) {
        case Parametrization::Kind::Circle:
            dv = Complex(0.0, kTwoPi) * v;
            ddv = Complex(0.0, kTwoPi) * dv;
            break;
        case Parametrization::Kind::HalfAngle:
            dv = Complex(0.0, 0.5) * v;
            ddv = Complex(0.0, 0.5) * dv;
            break;
        case Parametrization::Kind::Interval:
            dv = {1.0, 0.0};
            ddv = {0.0, 0.0};
            break;
    }
    std::vector<Complex> out(coeffs_.size());
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        Complex c1 = dcoeffs_[j].eval_or_throw(v, {1.0, 0.0});
        Complex c2 = ddcoeffs_[j].eval_or_throw(v, {1.0, 0.0});
        out[j] = c2 * dv * dv + c1 * ddv;
    }
    return out;
}

std::string CharPoly::to_string() const {
    std::ostringstream os;
    for (std::size_t j = coeffs_.size(); j-- > 0;) {
        os << "(" << coeffs_[j].to_string("v", "q") << ")";
        if (j > 0) os << "*L^" << j << " + ";
    }
    return os.str();
}

CharPoly CharPoly::from_operator(const QOperator& op, Parametrization p, std::vector<int>* dropped) {
    ClassicalSpecialization s = specialize_classical(op);
    if (dropped) *dropped = s.dropped;
    return CharPoly(std::move(s.coeffs), p);
}

} // namespace qwkb
