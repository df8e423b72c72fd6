#include "qwkb/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qwkb/quadrature.hpp"
#include "qwkb/roots.hpp"

namespace qwkb {

namespace {

/// Natural cubic spline on a uniform grid, complex values.
struct Spline {
    double x0 = 0.0, h = 1.0;
    std::vector<Complex> y, m2; // values and second derivatives at nodes

    Spline(double x0_, double h_, std::vector<Complex> y_) : x0(x0_), h(h_), y(std::move(y_)) {
        const std::size_t n = y.size();
        m2.assign(n, Complex(0, 0));
        if (n < 3) return;
        // natural ends: m2[0] = m2[n-1] = 0; interior tridiagonal system
        //   m2[i-1] + 4 m2[i] + m2[i+1] = 6 (y[i+1] - 2 y[i] + y[i-1]) / h^2
        std::vector<Complex> rhs(n), tmp(n);
        std::vector<double> c(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i)
            rhs[i] = 6.0 * (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h);
        c[1] = 0.25;
        tmp[1] = rhs[1] * 0.25;
        for (std::size_t i = 2; i + 1 < n; ++i) {
            double denom = 4.0 - c[i - 1];
            c[i] = 1.0 / denom;
            tmp[i] = (rhs[i] - tmp[i - 1]) / denom;
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m2[i] = tmp[i] - c[i] * m2[i + 1];
            if (i == 1) break;
        }
    }

    std::size_t seg(double x) const {
        double u = (x - x0) / h;
        long i = static_cast<long>(std::floor(u));
        i = std::clamp<long>(i, 0, static_cast<long>(y.size()) - 2);
        return static_cast<std::size_t>(i);
    }

    Complex eval(double x) const {
        std::size_t i = seg(x);
        double a = x0 + h * i;
        double t = (x - a) / h, u = 1.0 - t;
        return u * y[i] + t * y[i + 1] +
               (h * h / 6.0) * ((u * u * u - u) * m2[i] + (t * t * t - t) * m2[i + 1]);
    }

    /// First derivative sampled at every node.
    std::vector<Complex> deriv_nodes() const {
        const std::size_t n = y.size();
        std::vector<Complex> d(n);
        for (std::size_t i = 0; i + 1 < n; ++i)
            d[i] = (y[i + 1] - y[i]) / h - h * (2.0 * m2[i] + m2[i + 1]) / 6.0;
        d[n - 1] = (y[n - 1] - y[n - 2]) / h + h * (2.0 * m2[n - 1] + m2[n - 2]) / 6.0;
        return d;
    }

    /// Cumulative integral at every node, starting from 0 at the first.
    std::vector<Complex> cumulative() const {
        const std::size_t n = y.size();
        std::vector<Complex> F(n, Complex(0, 0));
        for (std::size_t i = 0; i + 1 < n; ++i) {
            Complex seg_int = 0.5 * h * (y[i] + y[i + 1]) -
                              h * h * h / 24.0 * (m2[i] + m2[i + 1]);
            F[i + 1] = F[i] + seg_int;
        }
        return F;
    }
};

/// Continuous-branch evaluator over the tracking grid.
struct BranchEval {
    const EigenGrid& grid;
    int m;

    Complex lambda(double t) const { return grid.branches_at(t)[m]; }
    Complex log_lambda(double t) const {
        std::size_t i = grid.locate(t);
        Complex base = grid.values()[m][i];
        Complex cur = lambda(t);
        return grid.logs()[m][i] + std::log(cur / base);
    }
};

void require_clean_branch(const EpsilonEquation& eq, const EigenGrid& grid, int branch) {
    for (const auto& e : grid.events()) {
        bool involves = e.branch_a == branch || e.branch_b == branch ||
                        e.kind == SpectralEvent::Kind::Singular ||
                        e.kind == SpectralEvent::Kind::DegreeDrop;
        if (involves && e.t > eq.x_lo() - 1e-12 && e.t < eq.x_hi() + 1e-12)
            throw std::runtime_error(std::string("branch has a ") + to_string(e.kind) +
                                     " flag at x=" + std::to_string(e.t) +
                                     "; WKB requires a regular equation");
    }
}

/// lambda'(x) = -P_x / P_lambda and lambda''(x), exact partials.
struct LambdaDerivs {
    Complex l1, l2;
};
LambdaDerivs lambda_derivs(const CharPoly& cp, double t, Complex lam) {
    CoeffEval ce = cp.eval_coeffs(t);
    std::vector<Complex> ct = cp.eval_coeff_dt(t);
    std::vector<Complex> ctt = cp.eval_coeff_dtt(t);
    auto horner = [&](const std::vector<Complex>& c, Complex z) {
        Complex acc(0, 0);
        for (std::size_t j = c.size(); j-- > 0;) acc = acc * z + c[j];
        return acc;
    };
    std::vector<Complex> cl(ce.c.size() > 1 ? ce.c.size() - 1 : 0);
    for (std::size_t j = 1; j < ce.c.size(); ++j) cl[j - 1] = ce.c[j] * static_cast<double>(j);
    std::vector<Complex> cll(cl.size() > 1 ? cl.size() - 1 : 0);
    for (std::size_t j = 1; j < cl.size(); ++j) cll[j - 1] = cl[j] * static_cast<double>(j);
    std::vector<Complex> ctl(ct.size() > 1 ? ct.size() - 1 : 0);
    for (std::size_t j = 1; j < ct.size(); ++j) ctl[j - 1] = ct[j] * static_cast<double>(j);

    Complex Px = horner(ct, lam);
    Complex Pl = horner(cl, lam);
    Complex Pxx = horner(ctt, lam);
    Complex Pxl = horner(ctl, lam);
    Complex Pll = horner(cll, lam);
    LambdaDerivs out;
    out.l1 = -Px / Pl;
    out.l2 = -(Pxx + 2.0 * Pxl * out.l1 + Pll * out.l1 * out.l1) / Pl;
    return out;
}

} // namespace

Complex FormalJet::eval(int s, double x) const {
    const auto& ph = phi.at(s);
    const std::size_t n = xs.size();
    double h = xs[1] - xs[0];
    long i = static_cast<long>(std::floor((x - xs[0]) / h)) - 1;
    i = std::clamp<long>(i, 0, static_cast<long>(n) - 4);
    // local cubic Lagrange on nodes i..i+3
    Complex acc(0, 0);
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        for (int b = 0; b < 4; ++b) {
            if (a == b) continue;
            w *= (x - xs[i + b]) / (xs[i + a] - xs[i + b]);
        }
        acc += w * ph[i + a];
    }
    return acc;
}

Complex FormalJet::Phi(double x, double eps, int max_s) const {
    int S = max_s < 0 ? max_order() : std::min(max_s, max_order());
    Complex acc(0, 0);
    double ep = 1.0;
    for (int s = 0; s <= S; ++s) {
        acc += eval(s, x) * ep;
        ep *= eps;
    }
    return acc;
}

FormalJet phi0(const EpsilonEquation& eq, const EigenGrid& grid, int branch,
               const WkbOptions& opts) {
    require_clean_branch(eq, grid, branch);
    BranchEval be{grid, branch};
    FormalJet jet;
    jet.branch = branch;
    const int M = opts.grid_points;
    const double lo = eq.x_lo(), hi = eq.x_hi(), h = (hi - lo) / M;
    jet.xs.resize(M + 1);
    for (int i = 0; i <= M; ++i) jet.xs[i] = lo + h * i;
    std::vector<Complex> p0(M + 1, Complex(0, 0));
    for (int i = 0; i < M; ++i) {
        auto re = integrate_adaptive([&](double t) { return be.log_lambda(t).real(); }, jet.xs[i],
                                     jet.xs[i + 1], opts.quad_tol, 20);
        auto im = integrate_adaptive([&](double t) { return be.log_lambda(t).imag(); }, jet.xs[i],
                                     jet.xs[i + 1], opts.quad_tol, 20);
        p0[i + 1] = p0[i] + Complex(re.value, im.value);
    }
    jet.phi.push_back(std::move(p0));
    jet.reliable.push_back(true);
    return jet;
}

namespace {

Complex phi1_prime_at(const EpsilonEquation& eq, const CharPoly& cp, const BranchEval& be,
                      double x) {
    Complex lam = be.lambda(x);
    LambdaDerivs ld = lambda_derivs(cp, x, lam);
    CoeffEval ce = cp.eval_coeffs(x);
    Complex W1(0, 0), W2(0, 0), lpow(1.0, 0.0);
    for (std::size_t j = 0; j < ce.c.size(); ++j) {
        double dj = static_cast<double>(j);
        W1 += dj * ce.c[j] * lpow; // sum_j j a_j lambda^j
        W2 += dj * dj * ce.c[j] * lpow;
        lpow *= lam;
    }
    if (std::abs(W1) < 1e-13) throw std::runtime_error("hierarchy divisor vanishes");
    Complex Pe = eq.P_eps(x, lam);
    Complex phi0dd = ld.l1 / lam;
    return -(0.5 * phi0dd * W2 + Pe) / W1;
}

} // namespace

void add_phi1(FormalJet& jet, const EpsilonEquation& eq, const EigenGrid& grid,
              const WkbOptions& opts) {
    require_clean_branch(eq, grid, jet.branch);
    BranchEval be{grid, jet.branch};
    CharPoly cp = eq.char_poly();
    const std::size_t M = jet.xs.size() - 1;
    std::vector<Complex> p1(M + 1, Complex(0, 0));
    for (std::size_t i = 0; i < M; ++i) {
        auto re = integrate_adaptive(
            [&](double t) { return phi1_prime_at(eq, cp, be, t).real(); }, jet.xs[i],
            jet.xs[i + 1], opts.quad_tol, 20);
        auto im = integrate_adaptive(
            [&](double t) { return phi1_prime_at(eq, cp, be, t).imag(); }, jet.xs[i],
            jet.xs[i + 1], opts.quad_tol, 20);
        p1[i + 1] = p1[i] + Complex(re.value, im.value);
    }
    if (jet.phi.size() < 2) {
        jet.phi.push_back(std::move(p1));
        jet.reliable.push_back(true);
    } else {
        jet.phi[1] = std::move(p1);
    }
}

namespace {

/// One hierarchy solve at a fixed grid resolution.
FormalJet hierarchy_solve(const EpsilonEquation& eq, const EigenGrid& grid, int branch,
                          int s_max, int M, const WkbOptions& opts) {
    WkbOptions o = opts;
    o.grid_points = M;
    FormalJet jet = phi0(eq, grid, branch, o);
    add_phi1(jet, eq, grid, o);
    if (s_max < 2) return jet;

    BranchEval be{grid, branch};
    CharPoly cp = eq.char_poly();
    const int d = eq.degree();
    const double h = jet.xs[1] - jet.xs[0];
    const std::size_t n = jet.xs.size();

    // lambda, powers, and exact low-order phi_0 derivatives on the grid
    std::vector<Complex> lam(n), w1(n);
    std::vector<std::vector<Complex>> lampow(n, std::vector<Complex>(d + 1));
    // derivative tables: dphi[s][t][i] = phi_s^{(t)} at node i, t >= 1
    std::vector<std::vector<std::vector<Complex>>> dphi(
        s_max + 1, std::vector<std::vector<Complex>>());
    std::vector<Complex> phi0d(n), phi0dd(n), phi0ddd(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = jet.xs[i];
        lam[i] = be.lambda(x);
        lampow[i][0] = 1.0;
        for (int j = 1; j <= d; ++j) lampow[i][j] = lampow[i][j - 1] * lam[i];
        LambdaDerivs ld = lambda_derivs(cp, x, lam[i]);
        phi0d[i] = be.log_lambda(x);
        phi0dd[i] = ld.l1 / lam[i];
        phi0ddd[i] = (ld.l2 * lam[i] - ld.l1 * ld.l1) / (lam[i] * lam[i]);
        CoeffEval ce = cp.eval_coeffs(x);
        Complex acc(0, 0);
        for (int j = 1; j <= d; ++j) acc += static_cast<double>(j) * ce.c[j] * lampow[i][j];
        w1[i] = acc;
        if (std::abs(acc) < 1e-13) throw std::runtime_error("hierarchy divisor vanishes");
    }
    // phi_0 derivatives: t=1..3 exact, beyond by spline differentiation
    dphi[0].push_back(phi0d);
    dphi[0].push_back(phi0dd);
    dphi[0].push_back(phi0ddd);
    for (int t = 4; t <= s_max + 1; ++t) {
        Spline sp(jet.xs[0], h, dphi[0].back());
        dphi[0].push_back(sp.deriv_nodes());
    }
    // phi_1 derivatives: t=1 exact (closed form), beyond by spline
    std::vector<Complex> phi1d(n);
    for (std::size_t i = 0; i < n; ++i) phi1d[i] = phi1_prime_at(eq, cp, be, jet.xs[i]);
    dphi[1].push_back(phi1d);
    for (int t = 2; t <= s_max; ++t) {
        Spline sp(jet.xs[0], h, dphi[1].back());
        dphi[1].push_back(sp.deriv_nodes());
    }

    // eps series of every coefficient at every node
    std::vector<std::vector<std::vector<Complex>>> aser(
        n, std::vector<std::vector<Complex>>(d + 1));
    for (std::size_t i = 0; i < n; ++i)
        for (int j = 0; j <= d; ++j) aser[i][j] = eq.coeff_eps_series(j, jet.xs[i], s_max);

    for (int s = 2; s <= s_max; ++s) {
        std::vector<Complex> rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            // A_r(j) for r = 1..s with phi_s' treated as zero
            // A_r = sum_{s'+t=r+1, t>=1} phi_{s'}^{(t)} j^t / t!
            std::vector<Complex> Ts(s + 1, Complex(0, 0));
            for (int j = 0; j <= d; ++j) {
                std::vector<Complex> A(s + 1, Complex(0, 0));
                for (int r = 1; r <= s; ++r) {
                    Complex acc(0, 0);
                    double jt = 1.0, fact = 1.0;
                    for (int t = 1; t <= r + 1; ++t) {
                        jt *= static_cast<double>(j);
                        fact *= t;
                        int sprime = r + 1 - t;
                        if (sprime > s_max) continue;
                        if (sprime == s && t == 1) continue; // unknown phi_s'
                        if (sprime < static_cast<int>(dphi.size()) &&
                            t - 1 < static_cast<int>(dphi[sprime].size()))
                            acc += dphi[sprime][t - 1][i] * jt / fact;
                    }
                    A[r] = acc;
                }
                // B = exp(A), B_0 = 1
                std::vector<Complex> B(s + 1, Complex(0, 0));
                B[0] = 1.0;
                for (int r = 1; r <= s; ++r) {
                    Complex acc(0, 0);
                    for (int k = 1; k <= r; ++k) acc += static_cast<double>(k) * A[k] * B[r - k];
                    B[r] = acc / static_cast<double>(r);
                }
                // coefficient of eps^s in a_j-series * lambda^j * B
                Complex term(0, 0);
                for (int u = 0; u <= s; ++u) term += aser[i][j][u] * B[s - u];
                Ts[s] += term * lampow[i][j];
            }
            rhs[i] = -Ts[s] / w1[i];
        }
        // integrate phi_s' with phi_s(x_lo) = 0 and extend derivative tables
        Spline sp(jet.xs[0], h, rhs);
        std::vector<Complex> phis = sp.cumulative();
        jet.phi.push_back(phis);
        jet.reliable.push_back(true);
        dphi[s].push_back(rhs);
        for (int t = 2; t + s <= s_max + 1; ++t) {
            Spline spd(jet.xs[0], h, dphi[s].back());
            dphi[s].push_back(spd.deriv_nodes());
        }
    }
    return jet;
}

} // namespace

FormalJet phi_higher(const EpsilonEquation& eq, const EigenGrid& grid, int branch, int s_max,
                     const WkbOptions& opts) {
    if (s_max < 2) {
        FormalJet jet = phi0(eq, grid, branch, opts);
        add_phi1(jet, eq, grid, opts);
        return jet;
    }
    FormalJet coarse = hierarchy_solve(eq, grid, branch, s_max, opts.grid_points / 2, opts);
    FormalJet fine = hierarchy_solve(eq, grid, branch, s_max, opts.grid_points, opts);
    // derivative-noise guard: compare orders across the two resolutions
    for (int s = 0; s <= s_max; ++s) {
        double diff = 0.0;
        for (std::size_t i = 0; i < coarse.xs.size(); ++i)
            diff = std::max(diff, std::abs(fine.eval(s, coarse.xs[i]) - coarse.phi[s][i]));
        fine.reliable[s] = diff < opts.noise_guard;
    }
    return fine;
}

std::vector<LogScaled> wkb_seed(const FormalJet& jet, double eps, long k0, long k1,
                                int max_order) {
    if (k0 * eps < jet.xs.front() - 1e-9 || k1 * eps > jet.xs.back() + 1e-9)
        throw std::invalid_argument("seed range outside the jet interval");
    std::vector<LogScaled> out;
    out.reserve(k1 - k0 + 1);
    for (long k = k0; k <= k1; ++k) {
        double x = std::clamp(k * eps, jet.xs.front(), jet.xs.back());
        Complex Phi = jet.Phi(x, eps, max_order);
        out.push_back(LogScaled::from_log(Phi.real() / eps, Phi.imag() / eps));
    }
    return out;
}

CoefficientFn DeflatedEquation::coefficient_fn() const {
    return [this](long k) {
        StepCoeffs sc;
        sc.a.resize(d + 1);
        std::size_t i = static_cast<std::size_t>(k - k_first);
        if (k < k_first || i >= c[0].size()) {
            sc.singular = true;
            return sc;
        }
        for (int s = 0; s <= d; ++s) sc.a[s] = c[s][i];
        return sc;
    };
}

std::vector<Complex> DeflatedEquation::char_roots_at(long k) const {
    std::vector<Complex> coeffs(d + 1);
    std::size_t i = static_cast<std::size_t>(k - k_first);
    for (int s = 0; s <= d; ++s) coeffs[s] = c[s][i];
    return find_roots(coeffs).roots;
}

DeflatedEquation deflate(const EpsilonEquation& eq, double eps, const RecursionTrace& dominant,
                         double zz_tol) {
    const int d = eq.degree();
    if (d < 2) throw std::invalid_argument("deflation needs degree >= 2");
    DeflatedEquation out;
    out.d = d - 1;
    out.eps = eps;
    out.k_first = dominant.k_first;
    long count = dominant.k_last() - dominant.k_first + 1 - d;
    if (count < 1) throw std::invalid_argument("dominant trace too short");
    out.c.assign(d, std::vector<Complex>(count));
    for (long i = 0; i < count; ++i) {
        long k = dominant.k_first + i;
        const LogScaled& base = dominant.at(k);
        if (base.is_zero()) throw std::runtime_error("zero dominant value at k=" + std::to_string(k));
        std::vector<Complex> b(d + 1);
        double bmax = 0.0;
        for (int j = 0; j <= d; ++j) {
            EvalResult a = eq.coeff(j, k * eps, eps);
            if (a.singular) throw std::runtime_error("singular coefficient in deflation");
            Complex ratio = (dominant.at(k + j) / base).to_complex();
            b[j] = a.value * ratio;
            bmax = std::max(bmax, std::abs(b[j]));
        }
        Complex zz(0, 0);
        for (int j = 0; j <= d; ++j) zz += b[j];
        out.zz_residual = std::max(out.zz_residual, std::abs(zz) / std::max(bmax, 1e-300));
        // c_s = sum_{j > s} b_j
        Complex acc(0, 0);
        for (int s = d - 1; s >= 0; --s) {
            acc += b[s + 1];
            out.c[s][i] = acc;
        }
    }
    if (out.zz_residual > zz_tol)
        throw std::runtime_error("dominant input is not a solution (sum_j b_j residual " +
                                 std::to_string(out.zz_residual) + ")");
    out.provenance = "deflated from degree " + std::to_string(d) + " equation at eps=" +
                     std::to_string(eps);
    return out;
}

DecomposeResult decompose_trace(const RecursionTrace& trace, const std::vector<FormalJet>& jets,
                                double x, const std::vector<Complex>* lambdas) {
    const int d = static_cast<int>(jets.size());
    double eps = trace.eps;
    long k = std::lround(x / eps);
    std::vector<LogScaled> W(d * d), rhs(d);
    for (int i = 0; i < d; ++i) {
        double xi = (k + i) * eps;
        rhs[i] = trace.at(k + i);
        for (int m = 0; m < d; ++m) {
            Complex Phi = jets[m].Phi(xi, eps);
            W[i * d + m] = LogScaled::from_log(Phi.real() / eps, Phi.imag() / eps);
        }
    }
    return decompose_in_basis(W, rhs, d, lambdas);
}

} // namespace qwkb
