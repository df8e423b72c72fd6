#pragma once

#include <array>
#include <functional>
#include <string>

#include "qwkb/epsilon.hpp"
#include "qwkb/logscaled.hpp"

namespace qwkb {

struct TraceEvent {
    long k;
    std::string what;
};

/// Log-scaled record of a simulated solution f(k) or psi(k*eps, eps).
struct RecursionTrace {
    enum class Mode { Q, Eps, Plain };
    Mode mode = Mode::Plain;
    double alpha = 0.0, eps = 0.0;
    long k_first = 0;
    std::vector<LogScaled> vals; // vals[i] is the value at k = k_first + i
    std::vector<TraceEvent> events;
    double max_residual = 0.0; // max |sum a_j f(k+j)| / max_j |a_j f(k+j)|
    bool aborted = false;
    long abort_k = -1;
    std::string abort_reason;

    long k_last() const { return k_first + static_cast<long>(vals.size()) - 1; }
    const LogScaled& at(long k) const { return vals.at(static_cast<std::size_t>(k - k_first)); }
    double log_abs(long k) const { return at(k).log_abs(); }
};

/// Coefficients a_0..a_d at step k; singular marks the step unusable.
struct StepCoeffs {
    std::vector<Complex> a;
    bool singular = false;
};
using CoefficientFn = std::function<StepCoeffs(long k)>;

/// Generic log-scaled forward iteration: solves for the top term at each step.
/// On a singular step: abort with location unless puncture is set, in which
/// case the step's coefficients are re-evaluated at a slightly shifted
/// argument (the provider receives the same k and applies its own shift), and
/// the event is recorded.
RecursionTrace iterate_generic(int d, long k_first, long k_last, const CoefficientFn& coef,
                               const CoefficientFn& punctured_coef,
                               std::vector<LogScaled> init, bool puncture);

/// q-mode: coefficients b_j(q^k, q) at q = exp(2*pi*i*alpha/n), k = 0..n-d.
RecursionTrace iterate_q(const QOperator& op, long n, double alpha, std::vector<Complex> init,
                         bool puncture = false);

/// eps-mode: coefficients a_j(k*eps, eps) while k*eps stays in I.
RecursionTrace iterate_eps(const EpsilonEquation& eq, double eps, std::vector<Complex> init,
                           bool puncture = false);
RecursionTrace iterate_eps_seeded(const EpsilonEquation& eq, double eps,
                                  std::vector<LogScaled> init, bool puncture = false);

/// Growth rate of a finished trace: (1/n) log|f(n)| in q-mode,
/// eps * log|psi(end)| in eps-mode.
double growth_rate(const RecursionTrace& trace);

/// Convergence table over a doubling-n / halving-eps ladder with Richardson
/// extrapolation (rate assumed r + C/n resp. r + C*eps).
struct GrowthTable {
    struct Row {
        double n_or_eps, rate, extrapolated, err_est;
    };
    std::vector<Row> rows;
    double extrapolated = 0.0;
    double err_est = 0.0;
};
GrowthTable growth_table_q(const QOperator& op, double alpha, long n0, int levels,
                           const std::vector<Complex>& init);
GrowthTable growth_table_eps(const EpsilonEquation& eq, double eps0, int levels,
                             const std::vector<Complex>& init);

/// Solve W c = rhs in log-scaled arithmetic; W is d x d row-major with rows
/// the shifted sample points and columns the basis solutions.
struct DecomposeResult {
    std::vector<LogScaled> coeffs;
    double residual = 0.0;       // relative, against the rhs scale
    double condition = 0.0;      // of the column-scaled double matrix
    double det_ratio = 0.0;      // |det W| / (prod_m |psi_m| * |Vandermonde(lambda)|), when lambdas given
};
DecomposeResult decompose_in_basis(const std::vector<LogScaled>& W,
                                   const std::vector<LogScaled>& rhs, int d,
                                   const std::vector<Complex>* lambdas = nullptr,
                                   double cond_limit = 1e12);

/// Companion matrix of the monic polynomial with the given roots, its
/// Vandermonde eigenvector matrix and diagonal factor, plus the entrywise
/// reconstruction residual of A = M D M^{-1}.
struct CompanionFactorization {
    int d = 0;
    std::vector<Complex> A, M, D; // row-major d x d
    double residual = 0.0;
};
CompanionFactorization companion_diagonalize(const std::vector<Complex>& roots,
                                             double min_separation = 1e-10);

/// (M^{-1} N)_{ij} = prod_{l != i} (y_j - x_l) / (x_i - x_l) for Vandermonde
/// matrices on nodes x and y.
std::vector<Complex> vandermonde_ratio(const std::vector<Complex>& x,
                                       const std::vector<Complex>& y);

/// Dense complex linear solve (partial pivoting), for test oracles and cond.
std::vector<Complex> dense_solve(std::vector<Complex> A, std::vector<Complex> b, int n);

/// Sup over n of ||A(n) ... A(m)||_2 for the companion matrices of a
/// normalized equation, per epsilon. Checks the spectral-radius bound
/// |lambda| <= 1 + C*eps on a coarse grid first.
struct TransferProbeResult {
    std::vector<double> sup_norm; // one entry per epsilon
};
TransferProbeResult transfer_norm_probe(const CoefficientFn& coef, int d, long k_first,
                                        long k_last, double bound_check_sup);
TransferProbeResult transfer_norm_probe_eps(const EpsilonEquation& eq, double C,
                                            const std::vector<double>& eps_list);

/// f(n+2) = f(n+1) + (n+1) f(n), f(1) = 1, f(2) = 2: log-scaled values of
/// log f for n up to n_max (index n).
std::vector<double> involution_log_f(long n_max);
/// Exact decimal value for small n (big-integer iteration).
std::string involution_exact(int n);
/// Decimal digit count of f(n) in exact mode.
std::size_t involution_digit_count(int n);

} // namespace qwkb
