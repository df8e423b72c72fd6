#include "qwkb/operator.hpp"

#include <cctype>
#include <sstream>

namespace qwkb {

namespace {

/// Operator-valued polynomial in E with rational-function coefficients,
/// kept in normal form (all E powers on the right) during parsing.
struct OpPoly {
    std::vector<RatFunc> c; // c[j] multiplies E^j

    static OpPoly scalar(RatFunc r) { return OpPoly{{std::move(r)}}; }
    static OpPoly shift() { // the operator E
        return OpPoly{{RatFunc(), RatFunc::constant(1)}};
    }

    void trim() {
        while (c.size() > 1 && c.back().is_zero()) c.pop_back();
    }
    int deg() const { return static_cast<int>(c.size()) - 1; }
    bool is_scalar() const { return c.size() <= 1; }
    bool is_zero() const { return c.empty() || (c.size() == 1 && c[0].is_zero()); }
};

OpPoly add(const OpPoly& a, const OpPoly& b, int sign) {
    OpPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (std::size_t j = 0; j < r.c.size(); ++j) {
        RatFunc x = j < a.c.size() ? a.c[j] : RatFunc();
        RatFunc y = j < b.c.size() ? b.c[j] : RatFunc();
        r.c[j] = sign > 0 ? x + y : x - y;
    }
    r.trim();
    return r;
}

OpPoly mul(const OpPoly& a, const OpPoly& b) {
    // E^k f(Q, q) = f(q^k Q, q) E^k
    OpPoly r;
    r.c.resize(a.c.size() + b.c.size() - 1);
    for (std::size_t k = 0; k < a.c.size(); ++k) {
        if (a.c[k].is_zero()) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j) {
            if (b.c[j].is_zero()) continue;
            r.c[k + j] = r.c[k + j] + a.c[k] * b.c[j].shift_Q_by_q(static_cast<std::int64_t>(k));
        }
    }
    r.trim();
    return r;
}

struct Token {
    enum Kind { Num, VarQbig, Varq, VarE, Plus, Minus, Star, Slash, Caret, LParen, RParen, BIdx, Equals, End };
    Kind kind;
    std::string text;
    std::size_t pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }
    const Token& peek() const { return tok_; }
    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
                ++i_;
            } else if (s_[i_] == '#') {
                while (i_ < s_.size() && s_[i_] != '\n') ++i_;
            } else {
                break;
            }
        }
        std::size_t p = i_;
        if (i_ >= s_.size()) {
            tok_ = {Token::End, "", p};
            return;
        }
        char ch = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i_;
            while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
            tok_ = {Token::Num, s_.substr(i_, j - i_), p};
            i_ = j;
            return;
        }
        ++i_;
        switch (ch) {
            case 'Q': tok_ = {Token::VarQbig, "Q", p}; return;
            case 'q': tok_ = {Token::Varq, "q", p}; return;
            case 'E': tok_ = {Token::VarE, "E", p}; return;
            case '+': tok_ = {Token::Plus, "+", p}; return;
            case '-': tok_ = {Token::Minus, "-", p}; return;
            case '*': tok_ = {Token::Star, "*", p}; return;
            case '/': tok_ = {Token::Slash, "/", p}; return;
            case '^': tok_ = {Token::Caret, "^", p}; return;
            case '(': tok_ = {Token::LParen, "(", p}; return;
            case ')': tok_ = {Token::RParen, ")", p}; return;
            case '=': tok_ = {Token::Equals, "=", p}; return;
            case 'b':
                if (i_ < s_.size() && s_[i_] == '[') {
                    std::size_t j = i_ + 1, k = j;
                    while (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) ++k;
                    if (k < s_.size() && s_[k] == ']' && k > j) {
                        tok_ = {Token::BIdx, s_.substr(j, k - j), p};
                        i_ = k + 1;
                        return;
                    }
                }
                throw ParseError("unexpected 'b'", p);
            default: throw ParseError(std::string("unexpected character '") + ch + "'", p);
        }
    }

    const std::string& s_;
    std::size_t i_ = 0;
    Token tok_{Token::End, "", 0};
};

class Parser {
public:
    explicit Parser(const std::string& s) : lex_(s) {}

    OpPoly parse_expr() {
        OpPoly acc = parse_term();
        while (lex_.peek().kind == Token::Plus || lex_.peek().kind == Token::Minus) {
            Token op = lex_.next();
            OpPoly rhs = parse_term();
            acc = add(acc, rhs, op.kind == Token::Plus ? +1 : -1);
        }
        return acc;
    }

    void expect_end() {
        if (lex_.peek().kind != Token::End)
            throw ParseError("trailing input after expression", lex_.peek().pos);
    }

    const Token& peek() { return lex_.peek(); }
    Token next() { return lex_.next(); }

private:
    OpPoly parse_term() {
        OpPoly acc = parse_factor();
        for (;;) {
            Token::Kind k = lex_.peek().kind;
            if (k == Token::Star) {
                lex_.next();
                acc = mul(acc, parse_factor());
            } else if (k == Token::Slash) {
                Token op = lex_.next();
                OpPoly rhs = parse_factor();
                if (!rhs.is_scalar())
                    throw ParseError("E in denominator", op.pos);
                if (rhs.is_zero()) throw ParseError("division by zero", op.pos);
                acc = mul(acc, OpPoly::scalar(rhs.c[0].inverse()));
            } else {
                break;
            }
        }
        return acc;
    }

    OpPoly parse_factor() {
        bool neg = false;
        while (lex_.peek().kind == Token::Plus || lex_.peek().kind == Token::Minus) {
            if (lex_.next().kind == Token::Minus) neg = !neg;
        }
        OpPoly base = parse_primary();
        if (lex_.peek().kind == Token::Caret) {
            Token op = lex_.next();
            std::int64_t e = parse_int_exponent();
            if (e >= 0) {
                OpPoly acc = OpPoly::scalar(RatFunc::constant(1));
                OpPoly b = base;
                std::int64_t n = e;
                while (n > 0) {
                    if (n & 1) acc = mul(acc, b);
                    b = mul(b, b);
                    n >>= 1;
                }
                base = acc;
            } else {
                if (!base.is_scalar()) throw ParseError("E raised to a negative power", op.pos);
                if (base.is_zero()) throw ParseError("zero raised to a negative power", op.pos);
                base = OpPoly::scalar(base.c[0].pow(e));
            }
        }
        if (neg) base = add(OpPoly::scalar(RatFunc()), base, -1);
        return base;
    }

    std::int64_t parse_int_exponent() {
        bool neg = false, paren = false;
        if (lex_.peek().kind == Token::LParen) {
            paren = true;
            lex_.next();
        }
        while (lex_.peek().kind == Token::Minus || lex_.peek().kind == Token::Plus) {
            if (lex_.next().kind == Token::Minus) neg = !neg;
        }
        Token t = lex_.next();
        if (t.kind != Token::Num) throw ParseError("expected integer exponent", t.pos);
        std::int64_t v = std::stoll(t.text);
        if (paren) {
            Token r = lex_.next();
            if (r.kind != Token::RParen) throw ParseError("expected ')' after exponent", r.pos);
        }
        return neg ? -v : v;
    }

    OpPoly parse_primary() {
        Token t = lex_.next();
        switch (t.kind) {
            case Token::Num: return OpPoly::scalar(RatFunc::constant(Rational(BigInt(t.text))));
            case Token::VarQbig: return OpPoly::scalar(RatFunc::from_poly(BiPoly::var_Q()));
            case Token::Varq: return OpPoly::scalar(RatFunc::from_poly(BiPoly::var_q()));
            case Token::VarE: return OpPoly::shift();
            case Token::LParen: {
                OpPoly inner = parse_expr();
                Token r = lex_.next();
                if (r.kind != Token::RParen) throw ParseError("expected ')'", r.pos);
                return inner;
            }
            default: throw ParseError("expected operand", t.pos);
        }
    }

    Lexer lex_;
};

bool looks_like_normal_form(const std::string& text) {
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
        if (text[i] == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (!std::isspace(static_cast<unsigned char>(text[i])))
            return text[i] == 'b' && text[i + 1] == '[';
    }
    return false;
}

QOperator parse_normal_form(const std::string& text) {
    Parser p(text);
    std::vector<RatFunc> coeffs;
    while (p.peek().kind != Token::End) {
        Token b = p.next();
        if (b.kind != Token::BIdx) throw ParseError("expected 'b[j]'", b.pos);
        int j = std::stoi(b.text);
        Token eq = p.next();
        if (eq.kind != Token::Equals) throw ParseError("expected '='", eq.pos);
        // The right-hand side runs until the next b[...] or end of input;
        // '+'/'-' never start a new coefficient line, so parse_expr stops right.
        OpPoly acc = p.parse_expr();
        if (!acc.is_scalar()) throw ParseError("E not allowed inside b[j]", b.pos);
        if (j >= static_cast<int>(coeffs.size())) coeffs.resize(j + 1);
        coeffs[j] = acc.c.empty() ? RatFunc() : acc.c[0];
    }
    return QOperator(std::move(coeffs));
}

} // namespace

QOperator::QOperator(std::vector<RatFunc> coeffs) : coeffs_(std::move(coeffs)) {
    while (coeffs_.size() > 1 && coeffs_.back().is_zero()) coeffs_.pop_back();
    if (coeffs_.empty() || (coeffs_.size() == 1 && coeffs_[0].is_zero()))
        throw std::invalid_argument("degenerate operator: all coefficients vanish");
}

EvalResult QOperator::eval_coefficient(int j, Complex Q, Complex q) const {
    return coeffs_.at(j).eval(Q, q);
}

std::string QOperator::serialize() const {
    std::ostringstream os;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        os << "b[" << j << "] = (" << coeffs_[j].num().to_string() << ") / ("
           << coeffs_[j].den().to_string() << ")\n";
    }
    return os.str();
}

bool QOperator::equals(const QOperator& o) const {
    if (coeffs_.size() != o.coeffs_.size()) return false;
    for (std::size_t j = 0; j < coeffs_.size(); ++j)
        if (!coeffs_[j].equals(o.coeffs_[j])) return false;
    return true;
}

QOperator parse_operator(const std::string& text) {
    if (looks_like_normal_form(text)) return parse_normal_form(text);
    Parser p(text);
    OpPoly poly = p.parse_expr();
    p.expect_end();
    return QOperator(std::move(poly.c));
}

ClassicalSpecialization specialize_classical(const QOperator& op) {
    ClassicalSpecialization out;
    out.coeffs.reserve(op.coeffs().size());
    for (int j = 0; j <= op.degree(); ++j) {
        const RatFunc& b = op.coeff(j);
        BiPoly den1 = b.den().substitute_q1();
        if (den1.is_zero()) {
            throw std::runtime_error("coefficient b[" + std::to_string(j) +
                                     "] has a denominator vanishing identically at q=1");
        }
        BiPoly num1 = b.num().substitute_q1();
        if (num1.is_zero() && !b.is_zero()) out.dropped.push_back(j);
        out.coeffs.emplace_back(std::move(num1), std::move(den1));
    }
    while (out.coeffs.size() > 1 && out.coeffs.back().is_zero()) out.coeffs.pop_back();
    if (out.coeffs.empty() || out.coeffs.back().is_zero())
        throw std::runtime_error("characteristic polynomial is identically zero");
    return out;
}

} // namespace qwkb
