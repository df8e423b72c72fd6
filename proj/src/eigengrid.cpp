#include "qwkb/eigengrid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "qwkb/parallel.hpp"
#include "qwkb/roots.hpp"

namespace qwkb {

namespace {

double pair_sep(const std::vector<Complex>& roots) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            m = std::min(m, std::abs(roots[i] - roots[j]));
    return m;
}

double root_scale(const std::vector<Complex>& roots) {
    double s = 0.0;
    for (auto z : roots) s = std::max(s, std::abs(z));
    return std::max(s, 1e-30);
}

/// Exhaustive assignment with branch-and-bound pruning; d stays small here.
void best_assignment_rec(const std::vector<std::vector<double>>& cost, std::vector<int>& cur,
                         std::vector<bool>& used, std::size_t row, double acc, double& best,
                         std::vector<int>& out) {
    const std::size_t d = cost.size();
    if (acc >= best) return;
    if (row == d) {
        best = acc;
        out = cur;
        return;
    }
    for (std::size_t j = 0; j < d; ++j) {
        if (used[j]) continue;
        used[j] = true;
        cur[row] = static_cast<int>(j);
        best_assignment_rec(cost, cur, used, row + 1, acc + cost[row][j], best, out);
        used[j] = false;
    }
}

std::vector<int> best_assignment(const std::vector<std::vector<double>>& cost) {
    const std::size_t d = cost.size();
    if (d > 10) throw std::invalid_argument("assignment limited to d <= 10");
    std::vector<int> cur(d, -1), out(d, -1);
    std::vector<bool> used(d, false);
    double best = std::numeric_limits<double>::infinity();
    best_assignment_rec(cost, cur, used, 0, 0.0, best, out);
    return out;
}

} // namespace

const char* to_string(SpectralEvent::Kind k) {
    switch (k) {
        case SpectralEvent::Kind::Collision: return "collision";
        case SpectralEvent::Kind::Vanishing: return "vanishing";
        case SpectralEvent::Kind::Singular: return "singular";
        case SpectralEvent::Kind::DegreeDrop: return "degree-drop";
    }
    return "?";
}

std::vector<Complex> roots_at(const CharPoly& poly, double t, const std::vector<Complex>* seeds) {
    CoeffEval ce = poly.eval_coeffs(t);
    if (ce.singular) throw std::runtime_error("coefficient singular at t=" + std::to_string(t));
    if (ce.degree_drop)
        throw std::runtime_error("leading coefficient vanishes at t=" + std::to_string(t) +
                                 " (degree drop)");
    return find_roots(ce.c, seeds).roots;
}

std::vector<Complex> match_to_previous(const std::vector<Complex>& prev,
                                       const std::vector<Complex>& cur) {
    const std::size_t d = prev.size();
    std::vector<std::vector<double>> cost(d, std::vector<double>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) cost[i][j] = std::abs(prev[i] - cur[j]);
    std::vector<int> asg = best_assignment(cost);

    // Exchange convention on near-ties: if swapping the targets of a pair
    // changes the total cost by less than tie_eps, orient the pair so that the
    // branch with the larger magnitude before gets the smaller magnitude after.
    double scale = std::max(root_scale(prev), root_scale(cur));
    const double tie_eps = 1e-7 * scale;
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a + 1; b < d; ++b) {
            double direct = cost[a][asg[a]] + cost[b][asg[b]];
            double swapped = cost[a][asg[b]] + cost[b][asg[a]];
            if (std::abs(direct - swapped) > tie_eps) continue;
            // Only a genuine crossing through a common point warrants it.
            if (std::abs(cur[asg[a]] - cur[asg[b]]) > 0.2 * scale) continue;
            double before = std::abs(prev[a]) - std::abs(prev[b]);
            double after = std::abs(cur[asg[a]]) - std::abs(cur[asg[b]]);
            bool have_rank = std::abs(before) > 1e-12 * scale && std::abs(after) > 1e-12 * scale;
            if (have_rank && (before > 0) == (after > 0)) std::swap(asg[a], asg[b]);
        }
    }
    std::vector<Complex> out(d);
    for (std::size_t i = 0; i < d; ++i) out[i] = cur[asg[i]];
    return out;
}

double refined_min_separation(const CharPoly& poly, double t, int* a_out, int* b_out) {
    CoeffEval ce = poly.eval_coeffs(t);
    if (ce.singular || ce.degree_drop) return 0.0;
    std::vector<Complex> roots = find_roots(ce.c).roots;
    double best = std::numeric_limits<double>::infinity();
    int ba = -1, bb = -1;
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            double s = std::abs(roots[i] - roots[j]);
            if (s < best) {
                best = s;
                ba = static_cast<int>(i);
                bb = static_cast<int>(j);
            }
        }
    double scale = root_scale(roots);
    if (best < 1e-3 * scale && ba >= 0) {
        // cluster-center estimate: double root of P is a simple root of P'
        std::vector<Complex> dc(ce.c.size() - 1);
        for (std::size_t j = 1; j < ce.c.size(); ++j) dc[j - 1] = ce.c[j] * static_cast<double>(j);
        Complex c = polish_root(dc, 0.5 * (roots[ba] + roots[bb]), 8);
        Complex p = poly_eval(ce.c, c);
        Complex pdd = poly_eval_derivative(dc, c);
        if (std::abs(pdd) > 1e-300) {
            double est = std::sqrt(8.0 * std::abs(p) / std::abs(pdd));
            best = std::min(best, est);
        }
    }
    if (a_out) *a_out = ba;
    if (b_out) *b_out = bb;
    return best;
}

EigenGrid::EigenGrid(CharPoly poly, TrackOptions opts) : poly_(std::move(poly)), opts_(opts) {}

void EigenGrid::solve_base_grid(int n) {
    const double lo = poly_.param().lo, hi = poly_.param().hi;
    const double h = (hi - lo) / n;
    std::vector<double> base(n + 1);
    for (int i = 0; i <= n; ++i) base[i] = lo + h * i;
    base[n] = hi;
    // Nudge grid points off singular coefficients / degree drops (deterministic).
    for (int i = 0; i <= n; ++i) {
        double dir = (i == n) ? -1.0 : 1.0;
        for (int k = 1; k <= 6; ++k) {
            CoeffEval ce = poly_.eval_coeffs(base[i]);
            if (!ce.singular && !ce.degree_drop) break;
            base[i] += dir * h * 1e-4 * k * k;
        }
    }
    ts_ = base;
    // Independent solves with deterministic circle seeds; parallel-safe.
    std::vector<std::vector<Complex>> cols(ts_.size());
    std::vector<std::string> errs(ts_.size());
    parallel_for(static_cast<long>(ts_.size()), [&](long i) {
        try {
            cols[i] = roots_at(poly_, ts_[i]);
        } catch (const std::exception& e) {
            errs[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < ts_.size(); ++i)
        if (!errs[i].empty()) throw std::runtime_error(errs[i]);
    base_cols_ = std::move(cols);
}

void EigenGrid::refine_and_match() {
    const int d = degree();
    // order at the start: by magnitude descending, then argument ascending
    std::vector<Complex> row = base_cols_[0];
    std::sort(row.begin(), row.end(), [](Complex x, Complex y) {
        double ax = std::abs(x), ay = std::abs(y);
        if (std::abs(ax - ay) > 1e-12 * (ax + ay + 1e-30)) return ax > ay;
        double px = std::arg(x), py = std::arg(y);
        if (px != py) return px < py;
        return x.real() < y.real();
    });

    std::vector<double> out_ts{ts_[0]};
    std::vector<std::vector<Complex>> out_cols{row};

    // Recursive bisection between consecutive base points. Seeds come from the
    // left, which keeps the sweep sequential and deterministic.
    struct Seg {
        double t0, t1;
        std::vector<Complex> r1; // unmatched roots at t1 (may be empty = solve)
        int depth;
    };
    for (std::size_t i = 0; i + 1 < ts_.size(); ++i) {
        std::vector<Seg> stack{{ts_[i], ts_[i + 1], base_cols_[i + 1], 0}};
        while (!stack.empty()) {
            Seg s = stack.back();
            stack.pop_back();
            const std::vector<Complex>& left = out_cols.back();
            std::vector<Complex> r1 = s.r1;
            if (r1.empty()) r1 = roots_at(poly_, s.t1, &left);
            std::vector<Complex> matched = match_to_previous(left, r1);
            double disp = 0.0;
            for (int m = 0; m < d; ++m) disp = std::max(disp, std::abs(matched[m] - left[m]));
            double sep = pair_sep(left);
            double floor = 1e-7 * root_scale(left);
            if (disp <= std::max(0.5 * sep, floor) || s.depth >= opts_.refine_cap) {
                if (s.depth >= opts_.refine_cap && disp > std::max(0.5 * sep, floor)) {
                    // genuine collision region: localize and flag, keep tracking
                    int a = -1, b = -1;
                    double est = refined_min_separation(poly_, 0.5 * (s.t0 + s.t1), &a, &b);
                    events_.push_back({SpectralEvent::Kind::Collision, 0.5 * (s.t0 + s.t1), a, b, est});
                }
                out_ts.push_back(s.t1);
                out_cols.push_back(std::move(matched));
            } else {
                double tm = 0.5 * (s.t0 + s.t1);
                stack.push_back({tm, s.t1, std::move(r1), s.depth + 1});
                stack.push_back({s.t0, tm, {}, s.depth + 1});
            }
        }
    }
    ts_ = std::move(out_ts);
    values_.assign(d, std::vector<Complex>(ts_.size()));
    for (std::size_t i = 0; i < ts_.size(); ++i)
        for (int m = 0; m < d; ++m) values_[m][i] = out_cols[i][m];
    base_cols_.clear();
}

void EigenGrid::canonical_exchange_pass() {
    const int d = degree();
    const std::size_t n = ts_.size();
    if (n < 4) return;
    bool changed = true;
    int guard = 0;
    while (changed && guard++ < d * d) {
        changed = false;
        for (int a = 0; a < d && !changed; ++a) {
            for (int b = a + 1; b < d && !changed; ++b) {
                // magnitude-tie mask
                std::vector<char> tie(n, 0);
                for (std::size_t i = 0; i < n; ++i) {
                    double ma = std::abs(values_[a][i]), mb = std::abs(values_[b][i]);
                    double scale = std::max({ma, mb, 1e-30});
                    tie[i] = std::abs(ma - mb) < opts_.tie_tol * scale ? 1 : 0;
                }
                // maximal interior tie regions spanning >= 3 points
                std::size_t i = 0;
                while (i < n) {
                    if (!tie[i]) {
                        ++i;
                        continue;
                    }
                    std::size_t j = i;
                    while (j + 1 < n && tie[j + 1]) ++j;
                    if (i > 0 && j + 1 < n && j - i + 1 >= 3) {
                        double before = std::abs(values_[a][i - 1]) - std::abs(values_[b][i - 1]);
                        double after = std::abs(values_[a][j + 1]) - std::abs(values_[b][j + 1]);
                        double jump = std::abs(values_[a][j] - values_[b][j]);
                        double scale = std::max(std::abs(values_[a][j]), std::abs(values_[b][j]));
                        // exchange only across a genuine value collision at the exit
                        if ((before > 0) == (after > 0) && before != 0.0 && after != 0.0 &&
                            jump < 1e-2 * std::max(scale, 1e-30)) {
                            for (std::size_t k = j; k < n; ++k)
                                std::swap(values_[a][k], values_[b][k]);
                            changed = true;
                            break;
                        }
                    }
                    i = j + 1;
                }
            }
        }
    }
}

void EigenGrid::compute_logs() {
    const int d = degree();
    logs_.assign(d, std::vector<Complex>(ts_.size()));
    for (int m = 0; m < d; ++m) {
        Complex z0 = values_[m][0];
        logs_[m][0] = std::log(z0); // principal branch at the start
        for (std::size_t i = 1; i < ts_.size(); ++i) {
            Complex ratio = values_[m][i] / values_[m][i - 1];
            logs_[m][i] = logs_[m][i - 1] + std::log(ratio);
        }
    }
}

void EigenGrid::relabel_branches() {
    const int d = degree();
    std::vector<double> sup(d, 0.0);
    for (int m = 0; m < d; ++m)
        for (std::size_t i = 0; i < ts_.size(); ++i)
            sup[m] = std::max(sup[m], std::abs(values_[m][i]));
    std::size_t probe = std::min<std::size_t>(1, ts_.size() - 1);
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        if (std::abs(sup[x] - sup[y]) > 1e-9 * (sup[x] + sup[y] + 1e-30)) return sup[x] > sup[y];
        double mx = std::abs(values_[x][probe]), my = std::abs(values_[y][probe]);
        if (std::abs(mx - my) > 1e-9 * (mx + my + 1e-30)) return mx > my;
        double px = std::arg(values_[x][probe]), py = std::arg(values_[y][probe]);
        if (px != py) return px < py;
        return x < y;
    });
    std::vector<std::vector<Complex>> v2(d), l2(d);
    for (int m = 0; m < d; ++m) {
        v2[m] = std::move(values_[order[m]]);
        l2[m] = std::move(logs_[order[m]]);
    }
    values_ = std::move(v2);
    logs_ = std::move(l2);
    std::vector<int> inv(d);
    for (int m = 0; m < d; ++m) inv[order[m]] = m;
    for (auto& e : events_) {
        if (e.branch_a >= 0 && e.branch_a < d) e.branch_a = inv[e.branch_a];
        if (e.branch_b >= 0 && e.branch_b < d) e.branch_b = inv[e.branch_b];
    }
}

namespace {

/// Golden-section argmin refinement of a positive function with a cusp.
double golden_min(const std::function<double(double)>& f, double a, double b, double tol) {
    const double gr = 0.6180339887498949;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

void EigenGrid::detect_events() {
    const int d = degree();
    const std::size_t n = ts_.size();
    const double t_tol = 1e-12 * (poly_.param().hi - poly_.param().lo);

    min_separation_ = std::numeric_limits<double>::infinity();
    min_magnitude_ = std::numeric_limits<double>::infinity();

    // pairwise separation minima -> collisions
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            std::vector<double> g(n);
            for (std::size_t i = 0; i < n; ++i) g[i] = std::abs(values_[a][i] - values_[b][i]);
            for (std::size_t i = 0; i < n; ++i) {
                bool locmin = (i == 0 || g[i] <= g[i - 1]) && (i + 1 == n || g[i] <= g[i + 1]);
                double scale = std::max({std::abs(values_[a][i]), std::abs(values_[b][i]), 1e-30});
                if (!locmin || g[i] > 1e-2 * scale) continue;
                double lo = ts_[i == 0 ? 0 : i - 1], hi = ts_[i + 1 == n ? n - 1 : i + 1];
                auto sep_fn = [&](double t) { return refined_min_separation(poly_, t); };
                double t_star = lo < hi ? golden_min(sep_fn, lo, hi, t_tol) : ts_[i];
                double est = refined_min_separation(poly_, t_star);
                min_separation_ = std::min(min_separation_, est);
                if (est < opts_.collision_tol * scale)
                    events_.push_back({SpectralEvent::Kind::Collision, t_star, a, b, est});
                // skip past this basin
                while (i + 1 < n && g[i + 1] >= g[i]) ++i;
            }
        }
    }
    // plain grid minima also feed the metadata
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Complex> col(d);
        for (int m = 0; m < d; ++m) col[m] = values_[m][i];
        min_separation_ = std::min(min_separation_, pair_sep(col));
    }

    // vanishing eigenvalues
    for (int m = 0; m < d; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            double a = std::abs(values_[m][i]);
            min_magnitude_ = std::min(min_magnitude_, a);
            bool locmin = (i == 0 || a <= std::abs(values_[m][i - 1])) &&
                          (i + 1 == n || a <= std::abs(values_[m][i + 1]));
            if (!locmin || a > 1e-3) continue;
            double lo = ts_[i == 0 ? 0 : i - 1], hi = ts_[i + 1 == n ? n - 1 : i + 1];
            auto mag_fn = [&](double t) { return branch_abs(m, t); };
            double t_star = lo < hi ? golden_min(mag_fn, lo, hi, t_tol) : ts_[i];
            double est = branch_abs(m, t_star);
            min_magnitude_ = std::min(min_magnitude_, est);
            if (est < opts_.vanishing_tol)
                events_.push_back({SpectralEvent::Kind::Vanishing, t_star, m, -1, est});
        }
    }

    // coefficient singularities / degree drops along the parameter range
    std::vector<double> met(n);
    for (std::size_t i = 0; i < n; ++i) met[i] = coefficient_metric(ts_[i]);
    for (std::size_t i = 0; i < n; ++i) {
        bool locmin = (i == 0 || met[i] <= met[i - 1]) && (i + 1 == n || met[i] <= met[i + 1]);
        if (!locmin || met[i] > 1e-3) continue;
        double lo = ts_[i == 0 ? 0 : i - 1], hi = ts_[i + 1 == n ? n - 1 : i + 1];
        auto fn = [&](double t) { return coefficient_metric(t); };
        double t_star = lo < hi ? golden_min(fn, lo, hi, t_tol) : ts_[i];
        double est = coefficient_metric(t_star);
        if (est < 1e-10) {
            // pole or removable 0/0: look at the numerator beside the smallest
            // denominator at the refined point
            Complex v = poly_.param().v_of_t(t_star);
            bool pole = false;
            for (const auto& c : poly_.coeffs()) {
                double dd = std::abs(c.den().eval_univariate(v));
                double nn = std::abs(c.num().eval_univariate(v));
                if (dd < 1e-8 && nn > 1e-6) pole = true;
            }
            events_.push_back({SpectralEvent::Kind::Singular, t_star, -1, -1, est, pole});
            // a collision sitting exactly on a genuine pole is an artifact of
            // the blow-up, not a separate eigenvalue event
            if (pole) {
                std::erase_if(events_, [&](const SpectralEvent& e) {
                    return e.kind == SpectralEvent::Kind::Collision &&
                           std::abs(e.t - t_star) < 1e-7 * (poly_.param().hi - poly_.param().lo);
                });
            }
        }
    }
    std::sort(events_.begin(), events_.end(),
              [](const SpectralEvent& x, const SpectralEvent& y) { return x.t < y.t; });
}

std::vector<Complex> EigenGrid::branches_at(double t) const {
    const int d = degree();
    std::size_t i = locate(t);
    CoeffEval ce = poly_.eval_coeffs(t);
    if (ce.singular) throw std::runtime_error("branch evaluation at flagged singular point");
    std::vector<Complex> out(d);
    // seed from linear interpolation between bracketing grid columns
    std::size_t j = std::min(i + 1, ts_.size() - 1);
    double w = (ts_[j] > ts_[i]) ? (t - ts_[i]) / (ts_[j] - ts_[i]) : 0.0;
    for (int m = 0; m < d; ++m) {
        Complex seed = values_[m][i] * (1.0 - w) + values_[m][j] * w;
        out[m] = polish_root(ce.c, seed, 4);
    }
    // guard: polish may merge branches near collisions; fall back to a full solve
    double sep_seeded = pair_sep(out);
    if (sep_seeded < 1e-12) {
        std::vector<Complex> seeds(d);
        for (int m = 0; m < d; ++m) seeds[m] = values_[m][i];
        std::vector<Complex> fresh = find_roots(ce.c, &seeds).roots;
        std::vector<Complex> prev(d);
        for (int m = 0; m < d; ++m) prev[m] = values_[m][i];
        out = match_to_previous(prev, fresh);
    }
    return out;
}

double EigenGrid::branch_abs(int m, double t) const { return std::abs(branches_at(t)[m]); }

std::size_t EigenGrid::locate(double t) const {
    auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    if (it == ts_.begin()) return 0;
    return static_cast<std::size_t>(std::distance(ts_.begin(), it)) - 1;
}

double EigenGrid::coefficient_metric(double t) const {
    Complex v = poly_.param().v_of_t(t);
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& c : poly_.coeffs()) {
        double n = std::abs(c.num().eval_univariate(v));
        double dd = std::abs(c.den().eval_univariate(v));
        worst = std::min(worst, dd / (1.0 + n));
    }
    // degree drop folds into the same metric
    CoeffEval ce = poly_.eval_coeffs_v(v);
    double scale = 0.0;
    for (auto z : ce.c) scale = std::max(scale, std::abs(z));
    if (scale > 0.0) worst = std::min(worst, std::abs(ce.c.back()) / scale);
    return worst;
}

EigenGrid track_eigenpaths(const CharPoly& poly, const TrackOptions& opts) {
    if (opts.grid_n < 16) throw std::invalid_argument("grid size must be >= 16");
    EigenGrid g(poly, opts);
    g.solve_base_grid(opts.grid_n);
    g.refine_and_match();
    g.canonical_exchange_pass();
    g.compute_logs();
    g.relabel_branches();
    g.detect_events();
    return g;
}

} // namespace qwkb
