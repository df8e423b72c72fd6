#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "qwkb/rational.hpp"

namespace qwkb {

/// Complex number stored as mantissa * exp(exponent) with |mantissa| in [1, 2)
/// (or exactly 0). Keeps recursions with growth like exp(n*sigma) representable
/// far past double range; the exponent is a natural-log scale.
class LogScaled {
public:
    LogScaled() = default;
    LogScaled(Complex m, double e) : mant_(m), expo_(e) { renorm(); }

    static LogScaled from(Complex z) { return LogScaled(z, 0.0); }
    static LogScaled from_log(double log_abs, double phase) {
        return LogScaled(std::polar(1.0, phase), log_abs);
    }
    static LogScaled zero() { return LogScaled(); }
    static LogScaled one() { return from({1.0, 0.0}); }

    bool is_zero() const { return mant_ == Complex(0.0, 0.0); }
    Complex mantissa() const { return mant_; }
    double exponent() const { return expo_; }

    /// ln|value|; -inf for zero.
    double log_abs() const {
        return is_zero() ? -std::numeric_limits<double>::infinity()
                         : std::log(std::abs(mant_)) + expo_;
    }
    double phase() const { return std::arg(mant_); }

    /// Convert when representable in double range.
    Complex to_complex() const {
        if (is_zero()) return {0.0, 0.0};
        return mant_ * std::exp(expo_);
    }

    LogScaled operator*(const LogScaled& o) const {
        if (is_zero() || o.is_zero()) return zero();
        return LogScaled(mant_ * o.mant_, expo_ + o.expo_);
    }
    LogScaled operator/(const LogScaled& o) const {
        return LogScaled(mant_ / o.mant_, expo_ - o.expo_);
    }
    LogScaled operator-() const {
        LogScaled r = *this;
        r.mant_ = -r.mant_;
        return r;
    }
    LogScaled operator+(const LogScaled& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        const LogScaled *hi = this, *lo = &o;
        if (o.expo_ > expo_) std::swap(hi, lo);
        double d = lo->expo_ - hi->expo_;
        if (d < -745.0) return *hi;
        return LogScaled(hi->mant_ + lo->mant_ * std::exp(d), hi->expo_);
    }
    LogScaled operator-(const LogScaled& o) const { return *this + (-o); }

    LogScaled operator*(Complex z) const { return *this * from(z); }

    /// Sum after factoring out the largest exponent (the d-term recursion update).
    static LogScaled sum(const std::vector<LogScaled>& xs) {
        double emax = -std::numeric_limits<double>::infinity();
        for (const auto& x : xs)
            if (!x.is_zero()) emax = std::max(emax, x.expo_);
        if (emax == -std::numeric_limits<double>::infinity()) return zero();
        Complex acc(0.0, 0.0);
        for (const auto& x : xs)
            if (!x.is_zero()) acc += x.mant_ * std::exp(x.expo_ - emax);
        return LogScaled(acc, emax);
    }

private:
    void renorm() {
        if (mant_ == Complex(0.0, 0.0)) {
            expo_ = 0.0;
            return;
        }
        double a = std::abs(mant_);
        if (a >= 1.0 && a < 2.0 && std::isfinite(expo_)) return;
        int e2 = 0;
        std::frexp(a, &e2); // a = f * 2^e2, f in [0.5, 1)
        double s = std::ldexp(1.0, e2 - 1); // mant/s has |.| in [1, 2)
        mant_ /= s;
        expo_ += std::log(s);
    }

    Complex mant_{0.0, 0.0};
    double expo_ = 0.0;
};

/// Solve A x = b by Gaussian elimination with partial pivoting in log-scaled
/// arithmetic. A is row-major d x d. Returns false on a vanishing pivot.
bool logscaled_solve(std::vector<LogScaled> A, std::vector<LogScaled> b, int d,
                     std::vector<LogScaled>& x);

/// Determinant via the same elimination.
LogScaled logscaled_det(std::vector<LogScaled> A, int d);

/// Largest and smallest singular values of a dense complex matrix (one-sided
/// Jacobi), for 2-norms and condition estimates of small matrices.
void svd_extremes(const std::vector<Complex>& A, int rows, int cols, double& smax, double& smin);

} // namespace qwkb
