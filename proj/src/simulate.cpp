#include "qwkb/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qwkb/roots.hpp"

namespace qwkb {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kResidualTol = 1e-8;
constexpr double kPunctureShift = 1e-7; // relative x-shift at punctured steps
} // namespace

RecursionTrace iterate_generic(int d, long k_first, long k_last, const CoefficientFn& coef,
                               const CoefficientFn& punctured_coef, std::vector<LogScaled> init,
                               bool puncture) {
    if (static_cast<int>(init.size()) != d)
        throw std::invalid_argument("need exactly d initial values");
    for (const auto& v : init)
        if (!std::isfinite(v.log_abs()) && !v.is_zero())
            throw std::invalid_argument("non-finite initial data");
    RecursionTrace tr;
    tr.k_first = k_first;
    tr.vals = std::move(init);
    for (long k = k_first; k + d <= k_last; ++k) {
        StepCoeffs sc = coef(k);
        if (sc.singular) {
            if (!puncture) {
                tr.aborted = true;
                tr.abort_k = k;
                tr.abort_reason = "singular leading/denominator at step k=" + std::to_string(k);
                return tr;
            }
            sc = punctured_coef(k);
            tr.events.push_back({k, "punctured singular step"});
            if (sc.singular) {
                tr.aborted = true;
                tr.abort_k = k;
                tr.abort_reason = "puncture failed at step k=" + std::to_string(k);
                return tr;
            }
        }
        double amax = 0.0;
        for (const auto& z : sc.a) amax = std::max(amax, std::abs(z));
        if (std::abs(sc.a[d]) < 1e-14 * amax) {
            if (!puncture) {
                tr.aborted = true;
                tr.abort_k = k;
                tr.abort_reason = "leading coefficient vanishes at step k=" + std::to_string(k);
                return tr;
            }
            sc = punctured_coef(k);
            tr.events.push_back({k, "punctured degree drop"});
        }
        // f(k+d) = -(sum_{j<d} a_j f(k+j)) / a_d
        std::vector<LogScaled> terms(d);
        std::size_t base = static_cast<std::size_t>(k - k_first);
        for (int j = 0; j < d; ++j) terms[j] = tr.vals[base + j] * sc.a[j];
        LogScaled top = -(LogScaled::sum(terms) / LogScaled::from(sc.a[d]));
        tr.vals.push_back(top);
        // residual of the full d+1 term identity, in log scale
        terms.push_back(top * sc.a[d]);
        LogScaled res = LogScaled::sum(terms);
        double scale = -1e300;
        for (const auto& t : terms)
            if (!t.is_zero()) scale = std::max(scale, t.log_abs());
        if (!res.is_zero() && std::isfinite(scale)) {
            double rel = std::exp(res.log_abs() - scale);
            tr.max_residual = std::max(tr.max_residual, rel);
        }
    }
    if (tr.max_residual > kResidualTol)
        throw std::runtime_error("recursion residual above tolerance: " +
                                 std::to_string(tr.max_residual));
    return tr;
}

RecursionTrace iterate_q(const QOperator& op, long n, double alpha, std::vector<Complex> init,
                         bool puncture) {
    const int d = op.degree();
    const double eps = alpha / static_cast<double>(n);
    auto coeffs_at = [&, d](long k, double shift) {
        StepCoeffs sc;
        sc.a.resize(d + 1);
        // q^k evaluated as exp(2 pi i k eps): stable for large k
        Complex Q = std::polar(1.0, kTwoPi * (static_cast<double>(k) + shift) * eps);
        Complex q = std::polar(1.0, kTwoPi * eps);
        for (int j = 0; j <= d; ++j) {
            EvalResult r = op.eval_coefficient(j, Q, q);
            if (r.singular) sc.singular = true;
            sc.a[j] = r.value;
        }
        return sc;
    };
    std::vector<LogScaled> ls;
    ls.reserve(init.size());
    for (Complex z : init) ls.push_back(LogScaled::from(z));
    RecursionTrace tr = iterate_generic(
        d, 0, n, [&](long k) { return coeffs_at(k, 0.0); },
        [&](long k) { return coeffs_at(k, kPunctureShift); }, std::move(ls), puncture);
    tr.mode = RecursionTrace::Mode::Q;
    tr.alpha = alpha;
    tr.eps = eps;
    return tr;
}

RecursionTrace iterate_eps_seeded(const EpsilonEquation& eq, double eps,
                                  std::vector<LogScaled> init, bool puncture) {
    const int d = eq.degree();
    long k_first = static_cast<long>(std::ceil(eq.x_lo() / eps - 1e-9));
    long k_last = static_cast<long>(std::floor(eq.x_hi() / eps + 1e-9));
    auto coeffs_at = [&, d](long k, double shift) {
        StepCoeffs sc;
        sc.a.resize(d + 1);
        double x = (static_cast<double>(k) + shift) * eps;
        for (int j = 0; j <= d; ++j) {
            EvalResult r = eq.coeff(j, x, eps);
            if (r.singular) sc.singular = true;
            sc.a[j] = r.value;
        }
        return sc;
    };
    RecursionTrace tr = iterate_generic(
        d, k_first, k_last, [&](long k) { return coeffs_at(k, 0.0); },
        [&](long k) { return coeffs_at(k, kPunctureShift); }, std::move(init), puncture);
    tr.mode = RecursionTrace::Mode::Eps;
    tr.eps = eps;
    return tr;
}

RecursionTrace iterate_eps(const EpsilonEquation& eq, double eps, std::vector<Complex> init,
                           bool puncture) {
    std::vector<LogScaled> ls;
    ls.reserve(init.size());
    for (Complex z : init) ls.push_back(LogScaled::from(z));
    return iterate_eps_seeded(eq, eps, std::move(ls), puncture);
}

double growth_rate(const RecursionTrace& trace) {
    if (trace.aborted) throw std::runtime_error("trace aborted early: " + trace.abort_reason);
    long n = trace.k_last();
    double la = trace.log_abs(n);
    if (trace.mode == RecursionTrace::Mode::Q)
        return la / static_cast<double>(n);
    return trace.eps * la;
}

namespace {

GrowthTable finish_table(std::vector<std::array<double, 2>> pts) {
    // pts: {n_or_eps, rate}; Richardson assuming rate = r + C * h with
    // h = 1/n (q-mode) or h = eps (eps-mode); callers order by decreasing h,
    // each level halving h.
    GrowthTable out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        GrowthTable::Row row{pts[i][0], pts[i][1], pts[i][1], 0.0};
        if (i > 0) {
            row.extrapolated = 2.0 * pts[i][1] - pts[i - 1][1];
            row.err_est = std::abs(row.extrapolated - pts[i][1]);
        }
        out.rows.push_back(row);
    }
    out.extrapolated = out.rows.back().extrapolated;
    if (out.rows.size() >= 2)
        out.err_est = std::abs(out.rows.back().extrapolated -
                               out.rows[out.rows.size() - 2].extrapolated);
    return out;
}

} // namespace

GrowthTable growth_table_q(const QOperator& op, double alpha, long n0, int levels,
                           const std::vector<Complex>& init) {
    std::vector<std::array<double, 2>> pts;
    for (int l = 0; l < levels; ++l) {
        long n = n0 << l;
        RecursionTrace tr = iterate_q(op, n, alpha, init);
        pts.push_back({static_cast<double>(n), growth_rate(tr)});
    }
    return finish_table(std::move(pts));
}

GrowthTable growth_table_eps(const EpsilonEquation& eq, double eps0, int levels,
                             const std::vector<Complex>& init) {
    std::vector<std::array<double, 2>> pts;
    for (int l = 0; l < levels; ++l) {
        double eps = eps0 / static_cast<double>(1L << l);
        RecursionTrace tr = iterate_eps(eq, eps, init);
        pts.push_back({eps, growth_rate(tr)});
    }
    return finish_table(std::move(pts));
}

DecomposeResult decompose_in_basis(const std::vector<LogScaled>& W,
                                   const std::vector<LogScaled>& rhs, int d,
                                   const std::vector<Complex>* lambdas, double cond_limit) {
    DecomposeResult out;
    // column-scaled double image for conditioning
    std::vector<double> colmax(d, -std::numeric_limits<double>::infinity());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            colmax[j] = std::max(colmax[j], W[i * d + j].log_abs());
    std::vector<Complex> Wd(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const LogScaled& w = W[i * d + j];
            Wd[i * d + j] = w.is_zero() ? Complex(0, 0)
                                        : w.mantissa() * std::exp(w.exponent() - colmax[j]);
        }
    double smax, smin;
    svd_extremes(Wd, d, d, smax, smin);
    out.condition = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (out.condition > cond_limit)
        throw std::runtime_error("ill-conditioned near collision/resonance (cond ~ " +
                                 std::to_string(out.condition) + ")");
    if (!logscaled_solve(W, rhs, d, out.coeffs))
        throw std::runtime_error("singular basis matrix");
    // residual
    double rscale = -1e300;
    for (const auto& r : rhs)
        if (!r.is_zero()) rscale = std::max(rscale, r.log_abs());
    double rmax = 0.0;
    for (int i = 0; i < d; ++i) {
        std::vector<LogScaled> terms(d + 1);
        for (int j = 0; j < d; ++j) terms[j] = W[i * d + j] * out.coeffs[j];
        terms[d] = -rhs[i];
        LogScaled res = LogScaled::sum(terms);
        if (!res.is_zero()) rmax = std::max(rmax, std::exp(res.log_abs() - rscale));
    }
    out.residual = rmax;
    if (lambdas) {
        LogScaled det = logscaled_det(W, d);
        // det W ~ prod_m psi_m(x) * Vandermonde(lambda) + O(eps); the first row
        // holds psi_m(x) when W is built from shifted samples
        LogScaled denom = LogScaled::one();
        for (int j = 0; j < d; ++j) denom = denom * W[j];
        Complex vando(1.0, 0.0);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) vando *= ((*lambdas)[j] - (*lambdas)[i]);
        double ratio = std::exp(det.log_abs() - denom.log_abs()) / std::abs(vando);
        out.det_ratio = ratio;
    }
    return out;
}

CompanionFactorization companion_diagonalize(const std::vector<Complex>& roots,
                                             double min_separation) {
    const int d = static_cast<int>(roots.size());
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (std::abs(roots[i] - roots[j]) <= min_separation)
                throw std::invalid_argument("repeated roots");
    CompanionFactorization out;
    out.d = d;
    // ascending coefficients of the monic polynomial prod (z - r)
    std::vector<Complex> c{Complex(1.0, 0.0)};
    for (Complex r : roots) {
        std::vector<Complex> nc(c.size() + 1, Complex(0, 0));
        for (std::size_t j = 0; j < c.size(); ++j) {
            nc[j + 1] += c[j];
            nc[j] -= r * c[j];
        }
        c = std::move(nc);
    }
    out.A.assign(d * d, Complex(0, 0));
    for (int i = 0; i + 1 < d; ++i) out.A[i * d + i + 1] = 1.0;
    for (int j = 0; j < d; ++j) out.A[(d - 1) * d + j] = -c[j];
    out.M.assign(d * d, Complex(0, 0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out.M[i * d + j] = cpow_int(roots[j], i);
    out.D.assign(d * d, Complex(0, 0));
    for (int j = 0; j < d; ++j) out.D[j * d + j] = roots[j];
    // residual of A - M D M^{-1}: solve M X = D M^{T}? direct: Y = M D, solve M Z = ?
    // compute M D M^{-1} as (solve M^T? ) -> use: R = A*M - M*D, then residual of
    // A = M D M^{-1} equals R M^{-1}; bound entrywise via solving.
    std::vector<Complex> AM(d * d, Complex(0, 0)), MD(d * d, Complex(0, 0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Complex acc(0, 0);
            for (int k = 0; k < d; ++k) acc += out.A[i * d + k] * out.M[k * d + j];
            AM[i * d + j] = acc;
            MD[i * d + j] = out.M[i * d + j] * roots[j];
        }
    // solve M^T y = e_i style to apply M^{-1} on the right: R * M^{-1}
    // equivalently solve (M^T X^T = R^T)
    std::vector<Complex> R(d * d);
    for (int i = 0; i < d * d; ++i) R[i] = AM[i] - MD[i];
    // X = R M^{-1}  <=>  X M = R  <=>  M^T X^T = R^T
    std::vector<Complex> MT(d * d), RT(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            MT[i * d + j] = out.M[j * d + i];
            RT[i * d + j] = R[j * d + i];
        }
    double resid = 0.0;
    for (int col = 0; col < d; ++col) {
        std::vector<Complex> b(d);
        for (int i = 0; i < d; ++i) b[i] = RT[i * d + col];
        std::vector<Complex> x = dense_solve(MT, b, d);
        for (int i = 0; i < d; ++i) resid = std::max(resid, std::abs(x[i]));
    }
    out.residual = resid;
    return out;
}

std::vector<Complex> vandermonde_ratio(const std::vector<Complex>& x,
                                       const std::vector<Complex>& y) {
    const int d = static_cast<int>(x.size());
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (std::abs(x[i] - x[j]) < 1e-300)
                throw std::invalid_argument("coincident x nodes");
    std::vector<Complex> out(d * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            Complex acc(1.0, 0.0);
            for (int l = 0; l < d; ++l) {
                if (l == i) continue;
                acc *= (y[j] - x[l]) / (x[i] - x[l]);
            }
            out[i * d + j] = acc;
        }
    }
    return out;
}

std::vector<Complex> dense_solve(std::vector<Complex> A, std::vector<Complex> b, int n) {
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(A[i * n + k]) > std::abs(A[piv * n + k])) piv = i;
        if (std::abs(A[piv * n + k]) < 1e-300) throw std::runtime_error("singular matrix");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(A[k * n + j], A[piv * n + j]);
            std::swap(b[k], b[piv]);
        }
        for (int i = k + 1; i < n; ++i) {
            Complex f = A[i * n + k] / A[k * n + k];
            if (f == Complex(0, 0)) continue;
            for (int j = k; j < n; ++j) A[i * n + j] -= f * A[k * n + j];
            b[i] -= f * b[k];
        }
    }
    std::vector<Complex> x(n);
    for (int i = n - 1; i >= 0; --i) {
        Complex acc = b[i];
        for (int j = i + 1; j < n; ++j) acc -= A[i * n + j] * x[j];
        x[i] = acc / A[i * n + i];
    }
    return x;
}

TransferProbeResult transfer_norm_probe(const CoefficientFn& coef, int d, long k_first,
                                        long k_last, double bound_check_sup) {
    // spectral-radius precondition on a coarse sample
    long samples = std::min<long>(64, k_last - k_first + 1);
    for (long s = 0; s < samples; ++s) {
        long k = k_first + (k_last - k_first) * s / std::max<long>(1, samples - 1);
        StepCoeffs sc = coef(k);
        if (sc.singular) continue;
        std::vector<Complex> cs = sc.a;
        RootSolveResult rr = find_roots(cs);
        for (Complex z : rr.roots)
            if (std::abs(z) > bound_check_sup + 1e-9)
                throw std::runtime_error("spectral radius bound violated at k=" + std::to_string(k) +
                                         " (|lambda| = " + std::to_string(std::abs(z)) + ")");
    }
    // prefix products of companion matrices, tracking the 2-norm
    std::vector<Complex> P; // current product, d x d
    P.assign(d * d, Complex(0, 0));
    for (int i = 0; i < d; ++i) P[i * d + i] = 1.0;
    double sup = 0.0;
    for (long k = k_first; k + d <= k_last; ++k) {
        StepCoeffs sc = coef(k);
        if (sc.singular) throw std::runtime_error("singular step in probe at k=" + std::to_string(k));
        std::vector<Complex> A(d * d, Complex(0, 0));
        for (int i = 0; i + 1 < d; ++i) A[i * d + i + 1] = 1.0;
        for (int j = 0; j < d; ++j) A[(d - 1) * d + j] = -sc.a[j] / sc.a[d];
        std::vector<Complex> Q(d * d, Complex(0, 0));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                Complex acc(0, 0);
                for (int l = 0; l < d; ++l) acc += A[i * d + l] * P[l * d + j];
                Q[i * d + j] = acc;
            }
        P = std::move(Q);
        double smax, smin;
        svd_extremes(P, d, d, smax, smin);
        sup = std::max(sup, smax);
    }
    TransferProbeResult out;
    out.sup_norm.push_back(sup);
    return out;
}

TransferProbeResult transfer_norm_probe_eps(const EpsilonEquation& eq, double C,
                                            const std::vector<double>& eps_list) {
    TransferProbeResult out;
    const int d = eq.degree();
    for (double eps : eps_list) {
        long k_first = static_cast<long>(std::ceil(eq.x_lo() / eps - 1e-9));
        long k_last = static_cast<long>(std::floor(eq.x_hi() / eps + 1e-9));
        auto coef = [&, eps](long k) {
            StepCoeffs sc;
            sc.a.resize(d + 1);
            for (int j = 0; j <= d; ++j) {
                EvalResult r = eq.coeff(j, k * eps, eps);
                if (r.singular) sc.singular = true;
                sc.a[j] = r.value;
            }
            return sc;
        };
        TransferProbeResult one = transfer_norm_probe(coef, d, k_first, k_last, 1.0 + C * eps);
        out.sup_norm.push_back(one.sup_norm[0]);
    }
    return out;
}

std::vector<double> involution_log_f(long n_max) {
    std::vector<double> lf(std::max<long>(3, n_max + 1), 0.0);
    lf[1] = 0.0;
    lf[2] = std::log(2.0);
    LogScaled a = LogScaled::from({1.0, 0.0});
    LogScaled b = LogScaled::from({2.0, 0.0});
    for (long n = 1; n + 2 <= n_max; ++n) {
        LogScaled c = b + a * Complex(static_cast<double>(n + 1), 0.0);
        lf[n + 2] = c.log_abs();
        a = b;
        b = c;
    }
    return lf;
}

namespace {

/// Minimal unsigned big integer (base 1e9) for the exact involution mode.
struct BigUint {
    std::vector<std::uint32_t> limb; // little-endian, base 1e9
    static BigUint from(std::uint64_t v) {
        BigUint b;
        while (v) {
            b.limb.push_back(static_cast<std::uint32_t>(v % 1000000000ull));
            v /= 1000000000ull;
        }
        if (b.limb.empty()) b.limb.push_back(0);
        return b;
    }
    BigUint plus(const BigUint& o) const {
        BigUint r;
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < std::max(limb.size(), o.limb.size()) || carry; ++i) {
            std::uint64_t s = carry;
            if (i < limb.size()) s += limb[i];
            if (i < o.limb.size()) s += o.limb[i];
            r.limb.push_back(static_cast<std::uint32_t>(s % 1000000000ull));
            carry = s / 1000000000ull;
        }
        return r;
    }
    BigUint times(std::uint64_t m) const {
        BigUint r;
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < limb.size() || carry; ++i) {
            std::uint64_t s = carry;
            if (i < limb.size()) s += static_cast<std::uint64_t>(limb[i]) * m;
            r.limb.push_back(static_cast<std::uint32_t>(s % 1000000000ull));
            carry = s / 1000000000ull;
        }
        return r;
    }
    std::string str() const {
        std::string s = std::to_string(limb.back());
        for (std::size_t i = limb.size() - 1; i-- > 0;) {
            std::string part = std::to_string(limb[i]);
            s += std::string(9 - part.size(), '0') + part;
        }
        return s;
    }
};

BigUint involution_big(int n) {
    if (n <= 0) throw std::invalid_argument("n >= 1");
    BigUint a = BigUint::from(1), b = BigUint::from(2);
    if (n == 1) return a;
    if (n == 2) return b;
    for (int m = 1; m + 2 <= n; ++m) {
        BigUint c = b.plus(a.times(static_cast<std::uint64_t>(m + 1)));
        a = b;
        b = c;
    }
    return b;
}

} // namespace

std::string involution_exact(int n) { return involution_big(n).str(); }

std::size_t involution_digit_count(int n) { return involution_big(n).str().size(); }

} // namespace qwkb
