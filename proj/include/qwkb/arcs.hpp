#pragma once

#include <string>
#include <vector>

#include "qwkb/eigengrid.hpp"

namespace qwkb {

/// One arc of constant eigenvalue-magnitude ordering.
struct Arc {
    double t_lo = 0.0, t_hi = 0.0;
    std::vector<int> order;        // order[pos] = branch index, |.| descending at midpoint
    bool resonance = false;        // some magnitudes tied throughout the arc
    std::vector<int> tied;         // branch indices participating in ties
    std::vector<double> singular_ts;
};

struct ArcPartition {
    std::vector<double> breakpoints; // t_0 < t_1 < ... < t_P (includes range ends)
    std::vector<Arc> arcs;

    int arc_index(double t) const; // breakpoint ties resolve to the left arc
};

struct PartitionOptions {
    double tie_tol = 1e-9;        // magnitude-tie threshold (relative)
    double bisect_tol = 1e-10;    // breakpoint refinement tolerance in t
};

ArcPartition partition_arcs(const EigenGrid& grid, const PartitionOptions& opts = {});

/// Regularity verdict with evidence, per the non-collision / non-vanishing
/// criterion on the eigenvalues plus leading/trailing coefficient checks.
struct RegularityReport {
    bool regular = false;
    double min_separation = 0.0, min_separation_t = 0.0;
    double min_magnitude = 0.0, min_magnitude_t = 0.0;
    double min_trailing = 0.0, min_trailing_t = 0.0; // |c_0(v(t))|
    double min_leading = 0.0, min_leading_t = 0.0;   // |c_d(v(t))|
    std::vector<SpectralEvent> events;
    std::string summary() const;
};

struct RegularityOptions {
    double collision_tol = 1e-6;
    double vanishing_tol = 1e-8;
};

RegularityReport check_regularity(const EigenGrid& grid, const RegularityOptions& opts = {});

} // namespace qwkb
