#include "qwkb/builtins.hpp"

#include <fstream>
#include <stdexcept>

namespace qwkb {
namespace builtins {

const std::string& trefoil_text() {
    static const std::string text =
        "# trefoil (3_1) noncommutative A-polynomial, degree 2 in E\n"
        "(q^3*Q^2*(q^2 - q^2*Q))/(q^3 - q^4*Q^2)\n"
        " + ((q - q^2*Q)*(q + q^2*Q)*(q^4 - q^5*Q + q^6*Q^2 - q^7*Q^2 - q^7*Q^3 + q^8*Q^4))"
        "/(q^2*Q*(q - q^4*Q^2)*(q^3 - q^4*Q^2)) * E\n"
        " + (-1 + q^2*Q)/(Q*(q - q^4*Q^2)) * E^2\n";
    return text;
}

const std::string& figure8_text() {
    static const std::string text =
        "# figure-eight (4_1) noncommutative A-polynomial, degree 3 in E\n"
        "(q^5*Q*(-q^3 + q^3*Q))/((q^2 + q^3*Q)*(-q^5 + q^6*Q^2))\n"
        " - ((q^2 - q^3*Q)*(q^8 - 2*q^9*Q + q^10*Q - q^9*Q^2 + q^10*Q^2 - q^11*Q^2 + q^10*Q^3"
        " - 2*q^11*Q^3 + q^12*Q^4))/(q^5*Q*(q + q^3*Q)*(q^5 - q^6*Q^2)) * E\n"
        " + ((-q + q^3*Q)*(q^4 + q^5*Q - 2*q^6*Q - q^7*Q^2 + q^8*Q^2 - q^9*Q^2 - 2*q^10*Q^3"
        " + q^11*Q^3 + q^12*Q^4))/(q^4*Q*(q^2 + q^3*Q)*(-q + q^6*Q^2)) * E^2\n"
        " + (q^4*Q*(-1 + q^3*Q))/((q + q^3*Q)*(q - q^6*Q^2)) * E^3\n";
    return text;
}

QOperator trefoil() { return parse_operator(trefoil_text()); }
QOperator figure8() { return parse_operator(figure8_text()); }

BiPoly trefoil_apoly() {
    // -(L - 1)(L + M^3)
    BiPoly L = BiPoly::var_Q(), M = BiPoly::var_q(), one = BiPoly::constant(1);
    return -((L - one) * (L + M.pow(3)));
}

BiPoly figure8_apoly() {
    // (L - 1)(L - L M - M^2 - 2 L M^2 - L^2 M^2 - L M^3 + L M^4)
    BiPoly L = BiPoly::var_Q(), M = BiPoly::var_q(), one = BiPoly::constant(1);
    BiPoly inner = L - L * M - M.pow(2) - BiPoly::constant(2) * L * M.pow(2) -
                   L.pow(2) * M.pow(2) - L * M.pow(3) + L * M.pow(4);
    return (L - one) * inner;
}

namespace {

// x lives in the first BiPoly slot, eps in the second.
RatFunc poly_x(std::initializer_list<std::pair<int, Rational>> terms) {
    BiPoly p;
    for (const auto& [e, c] : terms) p = p + BiPoly::monomial(c, e, 0);
    return RatFunc::from_poly(p);
}

} // namespace

EpsilonEquation synthetic_2x() {
    std::vector<RatFunc> a(3);
    a[0] = poly_x({{0, 2}, {1, 1}});                       // 2 + x
    a[1] = poly_x({{0, -3}, {1, -1}});                     // -(3 + x)
    a[2] = poly_x({{0, 1}});
    return EpsilonEquation::direct(std::move(a), 0.0, 1.0);
}

EpsilonEquation synthetic_firstorder() {
    std::vector<RatFunc> a(2);
    a[0] = poly_x({{0, -2}, {1, -1}});                     // -(2 + x)
    a[1] = poly_x({{0, 1}});
    return EpsilonEquation::direct(std::move(a), 0.0, 1.0);
}

EpsilonEquation const_d2() {
    std::vector<RatFunc> a(3);
    a[0] = poly_x({{0, 1}});
    a[1] = poly_x({{0, Rational(-5, 2)}});
    a[2] = poly_x({{0, 1}});
    return EpsilonEquation::direct(std::move(a), 0.0, 1.0);
}

EpsilonEquation synthetic_d3() {
    // (lambda - (2+x)) (lambda - (1+x/2)) (lambda - 1)
    std::vector<RatFunc> a(4);
    a[0] = poly_x({{0, -2}, {1, -2}, {2, Rational(-1, 2)}});            // -(2 + 2x + x^2/2)
    a[1] = poly_x({{0, 5}, {1, Rational(7, 2)}, {2, Rational(1, 2)}});  // 5 + 7x/2 + x^2/2
    a[2] = poly_x({{0, -4}, {1, Rational(-3, 2)}});                     // -(4 + 3x/2)
    a[3] = poly_x({{0, 1}});
    return EpsilonEquation::direct(std::move(a), 0.0, 1.0);
}

std::vector<std::string> names() {
    return {"trefoil",  "figure8",    "involutions", "synthetic-2x",
            "synthetic-firstorder", "const-d2", "synthetic-d3"};
}

bool is_builtin(const std::string& name) {
    for (const auto& n : names())
        if (n == name) return true;
    return false;
}

void write_corpus(const std::string& dir) {
    for (const auto& [name, text] :
         {std::pair<std::string, const std::string*>{"trefoil.qop", &trefoil_text()},
          std::pair<std::string, const std::string*>{"figure8.qop", &figure8_text()}}) {
        std::ofstream out(dir + "/" + name);
        if (!out) throw std::runtime_error("cannot write corpus file in " + dir);
        out << *text;
    }
}

} // namespace builtins
} // namespace qwkb
