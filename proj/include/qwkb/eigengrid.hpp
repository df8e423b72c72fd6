#pragma once

#include <vector>

#include "qwkb/charpoly.hpp"

namespace qwkb {

struct SpectralEvent {
    enum class Kind { Collision, Vanishing, Singular, DegreeDrop };
    Kind kind;
    double t = 0.0;
    int branch_a = -1, branch_b = -1;
    double measure = 0.0; // refined separation / |lambda| / denominator metric
    // Singular events only: true for a genuine pole (numerator bounded away
    // from zero), false for a removable 0/0 point of the coefficient data.
    bool pole_like = false;
};

const char* to_string(SpectralEvent::Kind k);

struct TrackOptions {
    int grid_n = 512;
    int refine_cap = 12;          // max halvings between base points
    double collision_tol = 1e-6;  // relative pair-separation threshold
    double vanishing_tol = 1e-8;  // relative root-magnitude threshold
    double tie_tol = 1e-9;        // magnitude-tie (resonance) threshold
};

/// Branch-consistent eigenvalue samples over the parameter grid, with
/// continuous logarithm branches and flagged spectral events.
///
/// Branch continuation through an isolated collision follows the square-root
/// exchange convention: the branch entering with the larger magnitude leaves
/// with the smaller one. Ties entering resonance arcs are resolved the same
/// way at the arc's exit collision.
class EigenGrid {
public:
    EigenGrid(CharPoly poly, TrackOptions opts);

    const CharPoly& poly() const { return poly_; }
    int degree() const { return poly_.degree(); }
    const std::vector<double>& ts() const { return ts_; }
    const std::vector<std::vector<Complex>>& values() const { return values_; }
    const std::vector<std::vector<Complex>>& logs() const { return logs_; }
    const std::vector<SpectralEvent>& events() const { return events_; }
    double min_separation() const { return min_separation_; }
    double min_magnitude() const { return min_magnitude_; }

    /// Branch values at an arbitrary parameter (grid-seeded Newton polish).
    std::vector<Complex> branches_at(double t) const;
    /// |lambda_m(t)| for one branch.
    double branch_abs(int m, double t) const;

    /// Grid index of the last grid point <= t.
    std::size_t locate(double t) const;

    /// min over j of |den_j(v(t))| / (1 + |num_j(v(t))|), folded with the
    /// relative size of the leading coefficient (degree-drop indicator).
    double coefficient_metric(double t) const;

private:
    friend EigenGrid track_eigenpaths(const CharPoly&, const TrackOptions&);

    void solve_base_grid(int n);
    void refine_and_match();
    void canonical_exchange_pass();
    void compute_logs();
    void relabel_branches();
    void detect_events();

    CharPoly poly_;
    TrackOptions opts_;
    std::vector<double> ts_;
    std::vector<std::vector<Complex>> values_; // [branch][index]
    std::vector<std::vector<Complex>> logs_;
    std::vector<std::vector<Complex>> base_cols_; // scratch during tracking
    std::vector<SpectralEvent> events_;
    double min_separation_ = 0.0;
    double min_magnitude_ = 0.0;
};

/// Roots of P(v(t), .) at one parameter value (multiset, polished).
/// Throws on singular coefficients or a degree drop at t.
std::vector<Complex> roots_at(const CharPoly& poly, double t,
                              const std::vector<Complex>* seeds = nullptr);

EigenGrid track_eigenpaths(const CharPoly& poly, const TrackOptions& opts = {});

/// Minimal-total-displacement assignment of cur onto prev (d <= 10); returns
/// the permuted copy of cur. Near-ties between a colliding pair are resolved
/// by the exchange convention described on EigenGrid.
std::vector<Complex> match_to_previous(const std::vector<Complex>& prev,
                                       const std::vector<Complex>& cur);

/// Refined separation of the closest root pair at t; uses the cluster-center
/// estimate sqrt(8 |P(c)| / |P''(c)|) when two roots nearly coincide, which
/// resolves true collisions well below the root-finder noise floor.
double refined_min_separation(const CharPoly& poly, double t, int* a = nullptr, int* b = nullptr);

} // namespace qwkb
