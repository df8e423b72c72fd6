#include "qwkb/roots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qwkb {

Complex poly_eval(const std::vector<Complex>& c, Complex z) {
    Complex acc(0.0, 0.0);
    for (std::size_t j = c.size(); j-- > 0;) acc = acc * z + c[j];
    return acc;
}

Complex poly_eval_derivative(const std::vector<Complex>& c, Complex z) {
    Complex acc(0.0, 0.0);
    for (std::size_t j = c.size(); j-- > 1;) acc = acc * z + c[j] * static_cast<double>(j);
    return acc;
}

double residual_scale(const std::vector<Complex>& c, Complex z) {
    double m = std::max(1.0, std::abs(z));
    double acc = 0.0, p = 1.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        acc += std::abs(c[j]) * p;
        p *= m;
    }
    return std::max(acc, 1e-300);
}

RootSolveResult find_roots(const std::vector<Complex>& coeffs,
                           const std::vector<Complex>* seeds, double rel_tol,
                           double accept_tol, int max_iter) {
    std::vector<Complex> c = coeffs;
    while (!c.empty() && std::abs(c.back()) == 0.0) c.pop_back();
    if (c.size() <= 1) throw std::invalid_argument("find_roots: polynomial is constant");

    // Exact zero roots come off the bottom first.
    std::size_t zero_roots = 0;
    while (zero_roots + 1 < c.size() && std::abs(c[zero_roots]) == 0.0) ++zero_roots;
    std::vector<Complex> cc(c.begin() + zero_roots, c.end());

    const int n = static_cast<int>(cc.size()) - 1;
    std::vector<Complex> z(n);
    if (seeds && static_cast<int>(seeds->size()) == n + static_cast<int>(zero_roots)) {
        // take the n seeds of largest magnitude (zero roots are pinned anyway)
        std::vector<Complex> s = *seeds;
        std::sort(s.begin(), s.end(), [](Complex a, Complex b) { return std::abs(a) > std::abs(b); });
        for (int i = 0; i < n; ++i) z[i] = s[i];
    } else if (seeds && static_cast<int>(seeds->size()) == n) {
        z = *seeds;
    } else {
        // Cauchy-bound circle with an asymmetric phase offset
        double r = 0.0;
        for (int j = 0; j < n; ++j) r = std::max(r, std::abs(cc[j] / cc[n]));
        r = 1.0 + r;
        double radius = std::min(r, 1.0 + std::pow(r, 1.0 / n));
        for (int i = 0; i < n; ++i)
            z[i] = std::polar(radius, 6.283185307179586 * (i + 0.25) / n + 0.4);
    }

    RootSolveResult out;
    bool done = false;
    for (int it = 0; it < max_iter && !done; ++it) {
        done = true;
        for (int i = 0; i < n; ++i) {
            Complex p = poly_eval(cc, z[i]);
            double scale = residual_scale(cc, z[i]);
            if (std::abs(p) < rel_tol * scale) continue;
            Complex dp = poly_eval_derivative(cc, z[i]);
            Complex ratio = (std::abs(dp) > 0) ? p / dp : Complex(1e-3, 1e-3);
            Complex sum(0.0, 0.0);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                Complex d = z[i] - z[j];
                if (std::abs(d) < 1e-300) d = Complex(1e-300, 0.0);
                sum += 1.0 / d;
            }
            Complex denom = 1.0 - ratio * sum;
            Complex step = (std::abs(denom) > 1e-300) ? ratio / denom : ratio;
            z[i] -= step;
            if (std::abs(step) > rel_tol * (1.0 + std::abs(z[i]))) done = false;
        }
    }
    // Newton polish
    for (int i = 0; i < n; ++i) z[i] = polish_root(cc, z[i], 3);

    out.roots.assign(zero_roots, Complex(0.0, 0.0));
    out.roots.insert(out.roots.end(), z.begin(), z.end());
    out.max_residual = 0.0;
    for (int i = 0; i < n; ++i)
        out.max_residual = std::max(out.max_residual,
                                    std::abs(poly_eval(cc, z[i])) / residual_scale(cc, z[i]));
    out.converged = out.max_residual < accept_tol;
    if (!out.converged)
        throw std::runtime_error("root finder failed to converge (residual " +
                                 std::to_string(out.max_residual) + ")");
    return out;
}

Complex polish_root(const std::vector<Complex>& coeffs, Complex seed, int steps) {
    Complex z = seed;
    for (int k = 0; k < steps; ++k) {
        Complex p = poly_eval(coeffs, z);
        Complex dp = poly_eval_derivative(coeffs, z);
        if (std::abs(dp) < 1e-300) break;
        Complex step = p / dp;
        // damp wild steps; near-multiple roots keep Newton local
        double cap = 0.5 * (1.0 + std::abs(z));
        if (std::abs(step) > cap) step *= cap / std::abs(step);
        Complex z2 = z - step;
        if (std::abs(poly_eval(coeffs, z2)) <= std::abs(p)) z = z2;
        else break;
    }
    return z;
}

} // namespace qwkb
