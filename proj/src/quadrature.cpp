#include "qwkb/quadrature.hpp"

#include <algorithm>

namespace qwkb {

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double gauss, kronrod;
};

Panel gk15(const std::function<double(double)>& f, double a, double b, long& evals) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    evals += 15;
    double rk = kWgk[7] * fc;
    double rg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double x = h * kXgk[j];
        double f1 = f(c - x), f2 = f(c + x);
        rk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) rg += kWg[j / 2] * (f1 + f2);
    }
    return {rg * h, rk * h};
}

void integrate_rec(const std::function<double(double)>& f, double a, double b, double tol,
                   int depth, int max_depth, QuadResult& out) {
    Panel p = gk15(f, a, b, out.evaluations);
    double err = std::abs(p.kronrod - p.gauss);
    // Kronrod error model sharpening
    double scaled = err == 0.0 ? 0.0 : std::pow(200.0 * err, 1.5);
    double est = std::min(err, scaled);
    if ((est <= tol && std::isfinite(p.kronrod)) || depth >= max_depth) {
        out.value += p.kronrod;
        out.error += est;
        return;
    }
    double m = 0.5 * (a + b);
    integrate_rec(f, a, m, 0.5 * tol, depth + 1, max_depth, out);
    integrate_rec(f, m, b, 0.5 * tol, depth + 1, max_depth, out);
}

} // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double tol, int max_depth) {
    QuadResult out;
    if (a == b) return out;
    integrate_rec(f, a, b, tol, 0, max_depth, out);
    return out;
}

QuadResult integrate_split(const std::function<double(double)>& f, double a, double b,
                           const std::vector<double>& splits, double tol, int max_depth) {
    std::vector<double> pts{a, b};
    for (double s : splits)
        if (s > a && s < b) pts.push_back(s);
    std::sort(pts.begin(), pts.end());
    QuadResult out;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] - pts[i] < 1e-15 * (std::abs(a) + std::abs(b) + 1.0)) continue;
        QuadResult piece = integrate_adaptive(f, pts[i], pts[i + 1],
                                              tol / static_cast<double>(pts.size()), max_depth);
        out.value += piece.value;
        out.error += piece.error;
        out.evaluations += piece.evaluations;
    }
    return out;
}

} // namespace qwkb
