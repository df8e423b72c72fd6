#include "qwkb/ratfunc.hpp"

#include <cmath>
#include <sstream>

namespace qwkb {

RatFunc::RatFunc(BiPoly num, BiPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::invalid_argument("rational function with zero denominator");
    normalize();
}

void RatFunc::normalize() {
    if (num_.is_zero()) {
        den_ = BiPoly::constant(1);
        return;
    }
    // Remove the common monomial factor Q^a q^b.
    auto [na, nb] = *num_.min_exponents();
    auto [da, db] = *den_.min_exponents();
    std::int64_t a = std::min(na, da), b = std::min(nb, db);
    if (a != 0 || b != 0) {
        num_ = num_ * BiPoly::monomial(1, -a, -b);
        den_ = den_ * BiPoly::monomial(1, -a, -b);
    }
    // Fix sign: make the denominator's lexicographically-first coefficient positive,
    // and divide through when the denominator is a constant.
    const auto& dt = den_.terms();
    if (den_.is_constant()) {
        Rational c = dt.begin()->second;
        num_ = num_ * BiPoly::constant(Rational(1) / c);
        den_ = BiPoly::constant(1);
        return;
    }
    if (dt.begin()->second < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

RatFunc RatFunc::operator-() const {
    RatFunc r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
    return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const {
    return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator*(const RatFunc& o) const {
    return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const { return *this * o.inverse(); }

RatFunc RatFunc::inverse() const {
    if (num_.is_zero()) throw std::invalid_argument("inverse of the zero rational function");
    return RatFunc(den_, num_);
}

RatFunc RatFunc::pow(std::int64_t n) const {
    if (n < 0) return inverse().pow(-n);
    return RatFunc(num_.pow(n), den_.pow(n));
}

bool RatFunc::equals(const RatFunc& o) const { return num_ * o.den_ == o.num_ * den_; }

RatFunc RatFunc::shift_Q_by_q(std::int64_t shift) const {
    RatFunc r;
    r.num_ = num_.shift_Q_by_q(shift);
    r.den_ = den_.shift_Q_by_q(shift);
    return r;
}

RatFunc RatFunc::d_dQ() const {
    return RatFunc(num_.d_dQ() * den_ - num_ * den_.d_dQ(), den_ * den_);
}

RatFunc RatFunc::d_dq() const {
    return RatFunc(num_.d_dq() * den_ - num_ * den_.d_dq(), den_ * den_);
}

EvalResult RatFunc::eval(Complex Q, Complex q) const {
    Complex n = num_.eval(Q, q);
    Complex d = den_.eval(Q, q);
    EvalResult r;
    if (std::abs(d) < kSingularRelTol * (1.0 + std::abs(n))) {
        r.singular = true;
        return r;
    }
    r.value = n / d;
    return r;
}

Complex RatFunc::eval_or_throw(Complex Q, Complex q) const {
    EvalResult r = eval(Q, q);
    if (r.singular) {
        std::ostringstream os;
        os << "singular evaluation at Q=(" << Q.real() << "," << Q.imag() << "), q=(" << q.real()
           << "," << q.imag() << ")";
        throw SingularEvaluation(os.str(), Q, q);
    }
    return r.value;
}

std::string RatFunc::to_string(const char* vQ, const char* vq) const {
    if (is_polynomial()) return num_.to_string(vQ, vq);
    std::ostringstream os;
    os << "(" << num_.to_string(vQ, vq) << ") / (" << den_.to_string(vQ, vq) << ")";
    return os.str();
}

} // namespace qwkb
