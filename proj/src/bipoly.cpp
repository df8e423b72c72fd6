#include "qwkb/bipoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qwkb {

BiPoly BiPoly::constant(const Rational& c) {
    BiPoly p;
    if (c != 0) p.terms_[{0, 0}] = c;
    return p;
}

BiPoly BiPoly::monomial(const Rational& c, std::int64_t a, std::int64_t b) {
    BiPoly p;
    if (c != 0) p.terms_[{a, b}] = c;
    return p;
}

bool BiPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponents{0, 0});
}

void BiPoly::add_term(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

BiPoly BiPoly::operator-() const {
    BiPoly r;
    for (const auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
}

BiPoly BiPoly::operator+(const BiPoly& o) const {
    BiPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

BiPoly BiPoly::operator-(const BiPoly& o) const {
    BiPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

BiPoly BiPoly::operator*(const BiPoly& o) const {
    BiPoly r;
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_)
            r.add_term({e1.first + e2.first, e1.second + e2.second}, c1 * c2);
    return r;
}

BiPoly BiPoly::pow(std::int64_t n) const {
    if (n < 0) throw std::invalid_argument("BiPoly::pow: negative exponent");
    BiPoly acc = constant(1);
    BiPoly base = *this;
    while (n > 0) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

BiPoly BiPoly::shift_Q_by_q(std::int64_t shift) const {
    // Q^a q^b -> (q^shift Q)^a q^b = Q^a q^(b + shift*a)
    BiPoly r;
    for (const auto& [e, c] : terms_) r.terms_[{e.first, e.second + shift * e.first}] = c;
    return r;
}

BiPoly BiPoly::d_dQ() const {
    BiPoly r;
    for (const auto& [e, c] : terms_)
        if (e.first != 0) r.add_term({e.first - 1, e.second}, c * Rational(e.first));
    return r;
}

BiPoly BiPoly::d_dq() const {
    BiPoly r;
    for (const auto& [e, c] : terms_)
        if (e.second != 0) r.add_term({e.first, e.second - 1}, c * Rational(e.second));
    return r;
}

BiPoly BiPoly::substitute_q1() const {
    BiPoly r;
    for (const auto& [e, c] : terms_) r.add_term({e.first, 0}, c);
    return r;
}

bool BiPoly::is_univariate_Q() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.first.second == 0; });
}

Complex BiPoly::eval(Complex Q, Complex q) const {
    if (terms_.empty()) return {0.0, 0.0};
    // Horner in Q over grouped q-polynomials: factor out the minimal exponents first
    // so Laurent terms do not force negative powers below.
    auto [a0, b0] = *min_exponents();
    // group by Q-exponent (shifted to >= 0)
    std::map<std::int64_t, std::vector<std::pair<std::int64_t, double>>> groups;
    for (const auto& [e, c] : terms_)
        groups[e.first - a0].push_back({e.second - b0, to_double(c)});
    Complex acc(0.0, 0.0);
    std::int64_t prev_a = -1;
    // iterate Q-exponents descending for Horner
    for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
        if (prev_a >= 0) acc *= cpow_int(Q, prev_a - it->first);
        Complex inner(0.0, 0.0);
        // simple Horner over sorted q-exponents (gaps bridged by powers)
        std::sort(it->second.begin(), it->second.end());
        std::int64_t prev_b = -1;
        for (auto jt = it->second.rbegin(); jt != it->second.rend(); ++jt) {
            if (prev_b >= 0) inner *= cpow_int(q, prev_b - jt->first);
            inner += jt->second;
            prev_b = jt->first;
        }
        if (prev_b > 0) inner *= cpow_int(q, prev_b);
        acc += inner;
        prev_a = it->first;
    }
    if (prev_a > 0) acc *= cpow_int(Q, prev_a);
    return acc * cpow_int(Q, a0) * cpow_int(q, b0);
}

Complex BiPoly::eval_univariate(Complex v) const { return eval(v, {1.0, 0.0}); }

Exponents BiPoly::strip_monomial_content() {
    if (terms_.empty()) return {0, 0};
    std::int64_t a = terms_.begin()->first.first, b = terms_.begin()->first.second;
    for (const auto& [e, c] : terms_) {
        a = std::min(a, e.first);
        b = std::min(b, e.second);
    }
    if (a == 0 && b == 0) return {0, 0};
    std::map<Exponents, Rational> shifted;
    for (const auto& [e, c] : terms_) shifted[{e.first - a, e.second - b}] = c;
    terms_ = std::move(shifted);
    return {a, b};
}

std::optional<Exponents> BiPoly::min_exponents() const {
    if (terms_.empty()) return std::nullopt;
    std::int64_t a = terms_.begin()->first.first, b = terms_.begin()->first.second;
    for (const auto& [e, c] : terms_) {
        a = std::min(a, e.first);
        b = std::min(b, e.second);
    }
    return Exponents{a, b};
}

namespace {

void append_power(std::ostream& os, const char* var, std::int64_t e) {
    if (e == 0) return;
    os << var;
    if (e != 1) os << "^" << e;
}

} // namespace

std::string BiPoly::to_string(const char* vQ, const char* vq) const {
    if (terms_.empty()) return "0";
    // descending in Q then q
    std::vector<std::pair<Exponents, Rational>> ts(terms_.begin(), terms_.end());
    std::sort(ts.begin(), ts.end(), [](const auto& x, const auto& y) {
        if (x.first.first != y.first.first) return x.first.first > y.first.first;
        return x.first.second > y.first.second;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : ts) {
        Rational ac = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        bool unit = (ac == 1) && !(e.first == 0 && e.second == 0);
        if (!unit) os << ac.str();
        bool needs_star = !unit;
        if (e.first != 0) {
            if (needs_star) os << "*";
            append_power(os, vQ, e.first);
            needs_star = true;
        }
        if (e.second != 0) {
            if (needs_star) os << "*";
            append_power(os, vq, e.second);
        }
    }
    return os.str();
}

} // namespace qwkb
