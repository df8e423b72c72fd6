#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qwkb/builtins.hpp"
#include "qwkb/operator.hpp"

using namespace qwkb;

namespace {

Complex unit(double t) { return std::polar(1.0, 6.283185307179586 * t); }

} // namespace

TEST_CASE("normal-form reading of E^2 - (Q+1)*E + Q") {
    QOperator op = parse_operator("E^2 - (Q+1)*E + Q");
    CHECK(op.degree() == 2);
    CHECK(op.coeff(0).equals(RatFunc::from_poly(BiPoly::var_Q())));
    CHECK(op.coeff(2).equals(RatFunc::constant(1)));
    // b_1 = -(Q+1)
    RatFunc b1 = op.coeff(1);
    CHECK(b1.equals(RatFunc::from_poly(-(BiPoly::var_Q() + BiPoly::constant(1)))));
}

TEST_CASE("EQ = qQE commutation: E*Q normalizes to q*Q*E") {
    QOperator a = parse_operator("E*Q");
    QOperator b = parse_operator("q*Q*E");
    CHECK(a.degree() == 1);
    CHECK(a.coeff(0).is_zero());
    CHECK(a.equals(b));
    // and the full confluence example with parentheses/powers
    QOperator c = parse_operator("E^2*Q");
    QOperator d = parse_operator("q^2*Q*E^2");
    CHECK(c.equals(d));
}

TEST_CASE("round-trip through the serialized normal form") {
    for (const std::string text :
         {std::string("E^2 - (Q+1)*E + Q"), builtins::trefoil_text(), builtins::figure8_text()}) {
        QOperator op = parse_operator(text);
        QOperator back = parse_operator(op.serialize());
        CHECK(op.equals(back));
    }
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse_operator("E^2 + )"), ParseError);
    CHECK_THROWS_AS(parse_operator("1/E"), ParseError);          // E in denominator
    CHECK_THROWS_AS(parse_operator("Q/(E+1)"), ParseError);      // E in denominator
    CHECK_THROWS_AS(parse_operator("E - E"), std::invalid_argument); // degenerate
    CHECK_THROWS_AS(parse_operator("E^-1"), ParseError);
}

TEST_CASE("trefoil operator parses to the printed b_2") {
    QOperator op = builtins::trefoil();
    CHECK(op.degree() == 2);
    // b_2 = (-1 + q^2 Q) / (Q (q - q^4 Q^2))
    BiPoly Q = BiPoly::var_Q(), q = BiPoly::var_q();
    BiPoly num = -BiPoly::constant(1) + q.pow(2) * Q;
    BiPoly den = Q * (q - q.pow(4) * Q.pow(2));
    CHECK(op.coeff(2).equals(RatFunc(num, den)));
}

TEST_CASE("eval_coefficient: direct arithmetic and singular detection") {
    QOperator op = parse_operator("E^2 - (Q+1)*E + Q");
    EvalResult r = op.eval_coefficient(1, Complex(0, 1), Complex(1, 0));
    CHECK(std::abs(r.value - Complex(-1, -1)) < 1e-14);
    // b_2 of the trefoil at Q=1, q=1 is 0/0
    QOperator tre = builtins::trefoil();
    EvalResult s = tre.eval_coefficient(2, Complex(1, 0), Complex(1, 0));
    CHECK(s.singular);
    // zero coefficient evaluates to 0 exactly
    QOperator shift = parse_operator("Q*E");
    EvalResult z = shift.eval_coefficient(0, Complex(0.3, 0.4), Complex(1, 0));
    CHECK(!z.singular);
    CHECK(z.value == Complex(0, 0));
}

TEST_CASE("classical specialization: (E-1)(E-Q) and E-2") {
    QOperator op = parse_operator("E^2 - (Q+1)*E + Q");
    ClassicalSpecialization s = specialize_classical(op);
    CHECK(s.coeffs.size() == 3);
    // lambda^2 - (v+1) lambda + v
    for (double t : {0.1, 0.37, 0.77}) {
        Complex v = unit(t);
        Complex c0 = s.coeffs[0].eval_or_throw(v, 1.0);
        Complex c1 = s.coeffs[1].eval_or_throw(v, 1.0);
        CHECK(std::abs(c0 - v) < 1e-14);
        CHECK(std::abs(c1 + v + 1.0) < 1e-14);
    }
    ClassicalSpecialization t2 = specialize_classical(parse_operator("E - 2"));
    CHECK(t2.coeffs.size() == 2);
    CHECK(t2.coeffs[0].equals(RatFunc::constant(-2)));
}

TEST_CASE("trefoil characteristic polynomial equals the printed closed form") {
    // ch P = -(L-1)(L+M^3) / (M (1+M)) with M the classical variable
    QOperator op = builtins::trefoil();
    ClassicalSpecialization s = specialize_classical(op);
    REQUIRE(s.coeffs.size() == 3);
    std::mt19937 rng(20240411);
    std::uniform_real_distribution<double> uni(0.02, 0.98);
    for (int trial = 0; trial < 20; ++trial) {
        Complex M = unit(uni(rng));
        Complex denom = M * (1.0 + M);
        for (int rep = 0; rep < 3; ++rep) {
            Complex L = unit(uni(rng)) * (0.5 + uni(rng));
            Complex lhs(0, 0), Lp(1, 0);
            for (int j = 0; j <= 2; ++j) {
                lhs += s.coeffs[j].eval_or_throw(M, 1.0) * Lp;
                Lp *= L;
            }
            Complex rhs = -(L - 1.0) * (L + M * M * M) / denom;
            CHECK(std::abs(lhs - rhs) < 1e-10 * (std::abs(lhs) + std::abs(rhs) + 1.0));
        }
    }
}

TEST_CASE("figure-eight characteristic polynomial matches the printed form") {
    QOperator op = builtins::figure8();
    CHECK(op.degree() == 3);
    ClassicalSpecialization s = specialize_classical(op);
    REQUIRE(s.coeffs.size() == 4);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(0.02, 0.98);
    for (int trial = 0; trial < 20; ++trial) {
        Complex M = unit(uni(rng));
        Complex L = unit(uni(rng)) * (0.5 + uni(rng));
        Complex lhs(0, 0), Lp(1, 0);
        for (int j = 0; j <= 3; ++j) {
            lhs += s.coeffs[j].eval_or_throw(M, 1.0) * Lp;
            Lp *= L;
        }
        Complex inner = L - L * M - M * M - 2.0 * L * M * M - L * L * M * M - L * M * M * M +
                        L * M * M * M * M;
        Complex rhs = (L - 1.0) * inner / (M * (1.0 + M) * (1.0 + M));
        CHECK(std::abs(lhs - rhs) < 1e-10 * (std::abs(lhs) + std::abs(rhs) + 1.0));
    }
}

TEST_CASE("specialization compatibility at q=1 on random unit-circle points") {
    QOperator op = builtins::figure8();
    ClassicalSpecialization s = specialize_classical(op);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> uni(0.03, 0.97);
    for (int trial = 0; trial < 25; ++trial) {
        Complex v = unit(uni(rng));
        for (int j = 0; j <= 3; ++j) {
            EvalResult direct = op.eval_coefficient(j, v, Complex(1.0, 0.0));
            Complex spec = s.coeffs[j].eval_or_throw(v, 1.0);
            REQUIRE(!direct.singular);
            CHECK(std::abs(direct.value - spec) < 1e-12 * (1.0 + std::abs(spec)));
        }
    }
}

TEST_CASE("rational-function normalization is idempotent and Laurent-friendly") {
    QOperator op = parse_operator("Q^-3*E + q^-2");
    CHECK(op.degree() == 1);
    RatFunc b1 = op.coeff(1);
    RatFunc b1n(b1.num(), b1.den());
    CHECK(b1.num() == b1n.num());
    CHECK(b1.den() == b1n.den());
    // cross-multiplied equality with an unnormalized twin
    BiPoly Q = BiPoly::var_Q();
    CHECK(b1.equals(RatFunc(BiPoly::constant(1), Q.pow(3))));
}

TEST_CASE("epsilon-form consistency with the operator (translate identity)") {
    QOperator op = builtins::trefoil();
    EpsilonEquation eq = EpsilonEquation::from_operator(op, 0.0, 1.0);
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> uni(0.05, 0.9);
    for (int trial = 0; trial < 20; ++trial) {
        double eps = 1e-4 * (1.0 + uni(rng));
        long k = 100 + trial * 37;
        double x = k * eps;
        for (int j = 0; j <= op.degree(); ++j) {
            Complex Q = std::polar(1.0, 6.283185307179586 * x);
            Complex q = std::polar(1.0, 6.283185307179586 * eps);
            EvalResult lhs = eq.coeff(j, x, eps);
            EvalResult rhs = op.eval_coefficient(j, Q, q);
            REQUIRE(!lhs.singular);
            CHECK(std::abs(lhs.value - rhs.value) < 1e-12 * (1.0 + std::abs(rhs.value)));
        }
    }
}

TEST_CASE("epsilon form of E - Q at x=0.25, eps=0") {
    EpsilonEquation eq = EpsilonEquation::from_operator(parse_operator("E - Q"), 0.0, 1.0);
    EvalResult a0 = eq.coeff(0, 0.25, 0.0);
    CHECK(std::abs(a0.value - Complex(0, -1)) < 1e-14);
    EvalResult a1 = eq.coeff(1, 0.25, 0.0);
    CHECK(std::abs(a1.value - 1.0) < 1e-14);
}

TEST_CASE("figure-eight epsilon form reports the (1+M) singularity") {
    EpsilonEquation eq = EpsilonEquation::from_operator(builtins::figure8(), 0.0, 1.0);
    // v = -1 at x = 1/2: the coefficient denominators vanish there
    EvalResult r = eq.coeff(0, 0.5, 0.0);
    CHECK(r.singular);
    CHECK_THROWS_AS(eq.coeffs_at(0.5, 0.0), SingularEvaluation);
    // and cleanly evaluates elsewhere
    CHECK_NOTHROW(eq.coeffs_at(0.3, 1e-4));
}

TEST_CASE("constant leading coefficient stays 1 in epsilon form") {
    EpsilonEquation eq = EpsilonEquation::from_operator(parse_operator("E^2 - (Q+1)*E + Q"), 0.0, 1.0);
    for (double x : {0.1, 0.5, 0.9}) {
        EvalResult a2 = eq.coeff(2, x, 1e-3);
        CHECK(std::abs(a2.value - 1.0) < 1e-14);
    }
}
