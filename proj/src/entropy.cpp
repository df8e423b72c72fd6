#include "qwkb/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qwkb/parallel.hpp"
#include "qwkb/quadrature.hpp"
#include "qwkb/roots.hpp"

namespace qwkb {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

const char* to_string(Normalization n) {
    switch (n) {
        case Normalization::UnitInterval: return "unit-interval";
        case Normalization::PerTwoPi: return "per-2pi";
        case Normalization::RawZeroTwoPi: return "raw-[0,2pi]";
    }
    return "?";
}

std::optional<Normalization> normalization_from_string(const std::string& s) {
    if (s == "unit-interval" || s == "unit") return Normalization::UnitInterval;
    if (s == "per-2pi" || s == "mean-angle") return Normalization::PerTwoPi;
    if (s == "raw-[0,2pi]" || s == "raw") return Normalization::RawZeroTwoPi;
    return std::nullopt;
}

SubsetSelection SubsetSelection::from_branches(const ArcPartition& part,
                                               const std::vector<int>& branches) {
    SubsetSelection sel;
    sel.per_arc_positions.resize(part.arcs.size());
    for (std::size_t p = 0; p < part.arcs.size(); ++p) {
        const auto& order = part.arcs[p].order;
        for (int m : branches) {
            auto it = std::find(order.begin(), order.end(), m);
            if (it == order.end()) throw std::invalid_argument("branch label out of range");
            sel.per_arc_positions[p].push_back(static_cast<int>(it - order.begin()) + 1);
        }
        std::sort(sel.per_arc_positions[p].begin(), sel.per_arc_positions[p].end());
    }
    return sel;
}

SubsetSelection SubsetSelection::uniform(int arc_count, std::vector<int> positions) {
    SubsetSelection sel;
    std::sort(positions.begin(), positions.end());
    sel.per_arc_positions.assign(arc_count, positions);
    return sel;
}

std::vector<std::vector<int>> SubsetSelection::resolve_branches(const ArcPartition& part) const {
    if (per_arc_positions.size() != part.arcs.size())
        throw std::invalid_argument("selection does not match the partition");
    std::vector<std::vector<int>> out(part.arcs.size());
    for (std::size_t p = 0; p < part.arcs.size(); ++p) {
        for (int pos : per_arc_positions[p]) {
            if (pos < 1 || pos > static_cast<int>(part.arcs[p].order.size()))
                throw std::invalid_argument("subset position out of range");
            out[p].push_back(part.arcs[p].order[pos - 1]);
        }
        if (out[p].empty()) throw std::invalid_argument("empty subset in arc");
    }
    return out;
}

double chi_S(const ArcPartition& part, const EigenGrid& grid, const SubsetSelection& sel,
             double t) {
    int p = part.arc_index(t);
    for (double s : part.arcs[p].singular_ts)
        if (std::abs(t - s) < 1e-12)
            throw std::runtime_error("chi requested at flagged singular point t=" + std::to_string(t));
    std::vector<std::vector<int>> resolved = sel.resolve_branches(part);
    std::vector<Complex> vals = grid.branches_at(t);
    double m = 0.0;
    for (int b : resolved[p]) m = std::max(m, std::abs(vals[b]));
    return m;
}

namespace {

double norm_factor(Normalization n, const Parametrization& par) {
    const double len = par.length();
    switch (n) {
        case Normalization::UnitInterval:
            return par.kind == Parametrization::Kind::Interval ? 1.0 : 1.0 / len;
        case Normalization::PerTwoPi: return par.angle_rate() / kTwoPi;
        case Normalization::RawZeroTwoPi: return par.angle_rate();
    }
    return 1.0;
}

std::vector<double> split_points(const ArcPartition& part, const EigenGrid& grid) {
    std::vector<double> splits = part.breakpoints;
    for (const auto& e : grid.events()) splits.push_back(e.t);
    std::sort(splits.begin(), splits.end());
    return splits;
}

/// integral of log chi over [a, b] in the native t measure
double integrate_log_chi(const ArcPartition& part, const EigenGrid& grid,
                         const std::vector<std::vector<int>>& resolved, double a, double b,
                         const std::vector<double>& splits, double tol) {
    if (b <= a) return 0.0;
    auto f = [&](double t) {
        int p = part.arc_index(t);
        std::vector<Complex> vals = grid.branches_at(t);
        double m = 0.0;
        for (int br : resolved[p]) m = std::max(m, std::abs(vals[br]));
        return std::log(std::max(m, 1e-300));
    };
    return integrate_split(f, a, b, splits, tol).value;
}

} // namespace

double sigma_S(const ArcPartition& part, const EigenGrid& grid, const SubsetSelection& sel,
               double alpha, const EntropyOptions& opts) {
    const Parametrization& par = grid.poly().param();
    double a = par.lo, b = par.lo + alpha * par.length();
    std::vector<std::vector<int>> resolved = sel.resolve_branches(part);
    double raw = integrate_log_chi(part, grid, resolved, a, b, split_points(part, grid), opts.quad_tol);
    return raw * norm_factor(opts.norm, par);
}

EntropyProfile entropy_profile(const ArcPartition& part, const EigenGrid& grid,
                               const std::vector<int>& branch_labels, const EntropyOptions& opts) {
    EntropyProfile prof;
    prof.branch_labels = branch_labels;
    prof.selection = SubsetSelection::from_branches(part, branch_labels);
    prof.norm = opts.norm;

    const Parametrization& par = grid.poly().param();
    std::vector<std::vector<int>> resolved = prof.selection.resolve_branches(part);
    std::vector<double> splits = split_points(part, grid);
    double C = norm_factor(opts.norm, par);

    prof.alphas.resize(opts.alpha_points);
    prof.sigma.resize(opts.alpha_points);
    for (int i = 0; i < opts.alpha_points; ++i)
        prof.alphas[i] = static_cast<double>(i) / (opts.alpha_points - 1);

    // accumulate panel-by-panel between consecutive alpha cut points
    std::vector<double> partial(opts.alpha_points, 0.0);
    parallel_for(opts.alpha_points - 1, [&](long i) {
        double a = par.lo + prof.alphas[i] * par.length();
        double b = par.lo + prof.alphas[i + 1] * par.length();
        partial[i + 1] = integrate_log_chi(part, grid, resolved, a, b, splits,
                                           opts.quad_tol / opts.alpha_points);
    });
    double acc = 0.0;
    for (int i = 0; i < opts.alpha_points; ++i) {
        acc += partial[i];
        prof.sigma[i] = C * acc;
    }

    // integrand samples on the tracking grid (plot/debug payload)
    prof.chi_ts = grid.ts();
    prof.chi_vals.resize(prof.chi_ts.size());
    for (std::size_t i = 0; i < prof.chi_ts.size(); ++i) {
        int p = part.arc_index(prof.chi_ts[i]);
        double m = 0.0;
        for (int br : resolved[p]) m = std::max(m, std::abs(grid.values()[br][i]));
        prof.chi_vals[i] = m;
    }
    return prof;
}

std::vector<EntropyProfile> entropy_set(const ArcPartition& part, const EigenGrid& grid,
                                        const EntropyOptions& opts,
                                        const std::vector<std::vector<int>>* explicit_subsets) {
    const int d = grid.degree();
    std::vector<std::vector<int>> subsets;
    if (explicit_subsets) {
        subsets = *explicit_subsets;
    } else {
        if (d > opts.subset_guard)
            throw std::runtime_error("2^d - 1 subsets exceeds the guard; pass an explicit list");
        for (int mask = 1; mask < (1 << d); ++mask) {
            std::vector<int> s;
            for (int m = 0; m < d; ++m)
                if (mask & (1 << m)) s.push_back(m);
            subsets.push_back(std::move(s));
        }
    }
    std::vector<EntropyProfile> out(subsets.size());
    parallel_for(static_cast<long>(subsets.size()),
                 [&](long i) { out[i] = entropy_profile(part, grid, subsets[i], opts); });
    // dedupe by integrand samples
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (out[j].dedupe_of >= 0) continue;
            if (out[i].chi_vals.size() != out[j].chi_vals.size()) continue;
            bool same = true;
            for (std::size_t k = 0; k < out[i].chi_vals.size() && same; ++k)
                same = std::abs(out[i].chi_vals[k] - out[j].chi_vals[k]) <=
                       1e-12 * (1.0 + std::abs(out[j].chi_vals[k]));
            if (same) {
                out[i].dedupe_of = static_cast<int>(j);
                break;
            }
        }
    }
    return out;
}

CharPoly charpoly_from_bivariate(const BiPoly& A, Parametrization param) {
    if (A.is_zero()) throw std::invalid_argument("zero polynomial");
    std::int64_t ldeg = 0;
    for (const auto& [e, c] : A.terms()) ldeg = std::max(ldeg, e.first);
    if (ldeg < 1) throw std::invalid_argument("positive L-degree required");
    std::int64_t lmin = ldeg;
    for (const auto& [e, c] : A.terms()) lmin = std::min(lmin, e.first);
    if (lmin < 0) throw std::invalid_argument("negative L-exponent in A-polynomial");
    std::vector<BiPoly> cs(ldeg + 1);
    for (const auto& [e, c] : A.terms())
        cs[e.first] = cs[e.first] + BiPoly::monomial(c, e.second, 0); // M moves to slot 1
    std::vector<RatFunc> coeffs;
    coeffs.reserve(cs.size());
    for (auto& p : cs) coeffs.push_back(RatFunc::from_poly(std::move(p)));
    return CharPoly(std::move(coeffs), param);
}

AEntropyResult a_entropy(const BiPoly& A, const std::vector<int>& branch_labels, double alpha,
                         Normalization norm, Parametrization param, int grid_n) {
    CharPoly cp = charpoly_from_bivariate(A, param);
    // leading-coefficient vanishing on a subarc is a hard error
    {
        int bad = 0;
        for (int i = 0; i < 32; ++i) {
            double t = param.lo + (i + 0.5) / 32.0 * param.length();
            CoeffEval ce = cp.eval_coeffs(t);
            if (ce.degree_drop) ++bad;
        }
        if (bad > 8) throw std::runtime_error("leading coefficient vanishes on a subarc");
    }
    TrackOptions topts;
    topts.grid_n = grid_n;
    EigenGrid grid = track_eigenpaths(cp, topts);
    ArcPartition part = partition_arcs(grid);
    EntropyOptions eopts;
    eopts.norm = norm;
    AEntropyResult res;
    res.profile = entropy_profile(part, grid, branch_labels, eopts);
    // profile sigma is on the alpha grid; evaluate the requested alpha exactly
    SubsetSelection sel = SubsetSelection::from_branches(part, branch_labels);
    res.value = sigma_S(part, grid, sel, alpha, eopts);
    res.norm = norm;
    res.parametrization = param.describe();
    return res;
}

double mahler_univariate(const std::vector<Complex>& coeffs) {
    std::vector<Complex> c = coeffs;
    while (!c.empty() && std::abs(c.back()) == 0.0) c.pop_back();
    if (c.empty()) throw std::invalid_argument("zero polynomial");
    if (c.size() == 1) return std::log(std::abs(c[0]));
    double m = std::log(std::abs(c.back()));
    for (Complex r : find_roots(c).roots) m += std::log(std::max(1.0, std::abs(r)));
    return m;
}

MahlerResult mahler_measure(const BiPoly& A, double quad_tol, int grid_n) {
    if (A.is_zero()) throw std::invalid_argument("zero polynomial");
    MahlerResult res;

    // (i) nested adaptive quadrature of log|A| over the torus, in fixed outer
    // panels integrated independently (parallel kernel, deterministic merge).
    const int panels = 64;
    std::vector<double> vals(panels, 0.0);
    std::vector<long> evals(panels, 0);
    auto log_abs_A = [&](double thL, double thM) {
        Complex L = std::polar(1.0, thL), M = std::polar(1.0, thM);
        double a = std::abs(A.eval(L, M));
        return std::log(std::max(a, 1e-300));
    };
    parallel_for(panels, [&](long p) {
        double a = kTwoPi * p / panels, b = kTwoPi * (p + 1) / panels;
        auto outer = [&](double thM) {
            QuadResult inner = integrate_adaptive([&](double thL) { return log_abs_A(thL, thM); },
                                                  0.0, kTwoPi, quad_tol * kTwoPi, 42);
            evals[p] += inner.evaluations;
            return inner.value / kTwoPi;
        };
        QuadResult q = integrate_adaptive(outer, a, b, quad_tol * kTwoPi / panels, 24);
        vals[p] = q.value;
    });
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        total += vals[p];
        res.evaluations += evals[p];
    }
    res.torus_quadrature = total / kTwoPi;

    // (ii) Jensen from the tracked root branches + leading-coefficient measure
    try {
        CharPoly cp = charpoly_from_bivariate(A, Parametrization::circle());
        TrackOptions topts;
        topts.grid_n = grid_n;
        EigenGrid grid = track_eigenpaths(cp, topts);
        ArcPartition part = partition_arcs(grid);
        std::vector<double> splits = split_points(part, grid);
        auto f = [&](double t) {
            double acc = 0.0;
            for (Complex z : grid.branches_at(t)) acc += std::log(std::max(1.0, std::abs(z)));
            return acc;
        };
        double integral = integrate_split(f, cp.param().lo, cp.param().hi, splits, 1e-9).value;
        // leading L-coefficient as a univariate polynomial in M
        std::int64_t ldeg = 0;
        for (const auto& [e, c] : A.terms()) ldeg = std::max(ldeg, e.first);
        std::int64_t mmax = 0, mmin = 0;
        std::vector<std::pair<std::int64_t, double>> lead;
        for (const auto& [e, c] : A.terms())
            if (e.first == ldeg) {
                lead.push_back({e.second, to_double(c)});
                mmax = std::max(mmax, e.second);
                mmin = std::min(mmin, e.second);
            }
        std::vector<Complex> lc(mmax - mmin + 1, Complex(0.0, 0.0));
        for (auto& [em, cv] : lead) lc[em - mmin] = cv;
        res.leading_coeff_measure = mahler_univariate(lc);
        res.jensen_from_roots = integral + res.leading_coeff_measure;
    } catch (const std::exception&) {
        res.roots_ok = false; // fall back to the quadrature value alone
        res.jensen_from_roots = res.torus_quadrature;
    }
    res.disagreement = std::abs(res.torus_quadrature - res.jensen_from_roots);
    return res;
}

} // namespace qwkb
