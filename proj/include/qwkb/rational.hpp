#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qwkb {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parse "123", "-7/2" style literals.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational literal with zero denominator: " + s);
    return Rational(num, den);
}

/// Integer power of a complex number (binary exponentiation; b may be negative).
inline Complex cpow_int(Complex z, long long b) {
    if (b < 0) return 1.0 / cpow_int(z, -b);
    Complex acc(1.0, 0.0);
    while (b > 0) {
        if (b & 1) acc *= z;
        z *= z;
        b >>= 1;
    }
    return acc;
}

} // namespace qwkb
