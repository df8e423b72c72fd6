#pragma once

#include <optional>

#include "qwkb/arcs.hpp"

namespace qwkb {

/// Normalization conventions for the entropy integral. The two printed
/// figure-eight values need the raw angle integral over the full circle;
/// the mean conventions make a constant-|root| polynomial integrate to
/// log of that constant. Every profile records the convention used.
enum class Normalization { UnitInterval, PerTwoPi, RawZeroTwoPi };
const char* to_string(Normalization n);
std::optional<Normalization> normalization_from_string(const std::string& s);

/// Per-arc subsets in sigma_p-sorted position indices (1-based).
struct SubsetSelection {
    std::vector<std::vector<int>> per_arc_positions;

    /// Positions occupied by the given branch labels in every arc.
    static SubsetSelection from_branches(const ArcPartition& part, const std::vector<int>& branches);
    /// The same subset positions in every arc.
    static SubsetSelection uniform(int arc_count, std::vector<int> positions);

    /// Resolve to branch indices per arc through sigma_p.
    std::vector<std::vector<int>> resolve_branches(const ArcPartition& part) const;
};

/// chi_S(t): the largest selected eigenvalue magnitude at t.
double chi_S(const ArcPartition& part, const EigenGrid& grid, const SubsetSelection& sel, double t);

struct EntropyOptions {
    Normalization norm = Normalization::UnitInterval;
    int alpha_points = 101;
    double quad_tol = 1e-9;
    int subset_guard = 12; // refuse full enumeration beyond 2^guard - 1 subsets
};

struct EntropyProfile {
    std::vector<int> branch_labels; // user-facing selection when branch-based
    SubsetSelection selection;
    Normalization norm = Normalization::UnitInterval;
    std::vector<double> alphas;
    std::vector<double> sigma;      // accumulated entropy integral, see sigma_S
    std::vector<double> chi_ts, chi_vals; // integrand samples on the tracking grid
    int dedupe_of = -1;             // index of an identical-integrand profile
    double sigma1() const { return sigma.empty() ? 0.0 : sigma.back(); }
};

/// The running entropy integral
///   sigma(alpha) = C * integral over [t_lo, t_lo + alpha * len] of log chi_S
/// with C fixed by the normalization (angle units for the raw convention).
/// sigma(0) = 0 exactly; at alpha = 1 this is the S-entropy of the full range.
double sigma_S(const ArcPartition& part, const EigenGrid& grid, const SubsetSelection& sel,
               double alpha, const EntropyOptions& opts);

EntropyProfile entropy_profile(const ArcPartition& part, const EigenGrid& grid,
                               const std::vector<int>& branch_labels, const EntropyOptions& opts);

/// One profile per nonempty branch-label subset (or the explicit list);
/// profiles with identical integrands are cross-referenced via dedupe_of.
std::vector<EntropyProfile> entropy_set(const ArcPartition& part, const EigenGrid& grid,
                                        const EntropyOptions& opts,
                                        const std::vector<std::vector<int>>* explicit_subsets = nullptr);

/// A-entropy of a bivariate polynomial A(L, M): tracks the L-roots over the
/// parametrized M-curve and integrates under the given convention. The L
/// exponent lives in the first BiPoly slot, M in the second.
struct AEntropyResult {
    double value = 0.0;
    Normalization norm;
    std::string parametrization;
    EntropyProfile profile;
};
AEntropyResult a_entropy(const BiPoly& A, const std::vector<int>& branch_labels, double alpha,
                         Normalization norm = Normalization::RawZeroTwoPi,
                         Parametrization param = Parametrization::circle(), int grid_n = 1024);

/// Mahler measure of A(L, M) over the torus, two independent routes:
/// (i) nested adaptive quadrature of log|A|, (ii) Jensen from the tracked
/// root branches plus the one-variable measure of the leading L-coefficient.
struct MahlerResult {
    double torus_quadrature = 0.0;
    double jensen_from_roots = 0.0;
    double leading_coeff_measure = 0.0;
    double disagreement = 0.0;
    long evaluations = 0;
    bool roots_ok = true;
};
MahlerResult mahler_measure(const BiPoly& A, double quad_tol = 3e-7, int grid_n = 1024);

/// Mahler measure of a univariate polynomial from its roots (Jensen).
double mahler_univariate(const std::vector<Complex>& coeffs);

/// Build the CharPoly whose lambda-roots are the L-roots of A(L, M) along the
/// parametrized curve.
CharPoly charpoly_from_bivariate(const BiPoly& A, Parametrization param);

} // namespace qwkb
