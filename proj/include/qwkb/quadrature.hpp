#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace qwkb {

/// Result of an adaptive integration: value and an error estimate.
struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
};

/// Adaptive Gauss-Kronrod (G7, K15) panel integration. Panels are bisected
/// until the local error estimate meets the pro-rated tolerance or the depth
/// cap is hit. Nodes are interior, so integrable endpoint singularities
/// (log, sqrt-derivative) are handled by refinement alone.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double tol = 1e-9, int max_depth = 48);

/// Same, with mandatory interior split points (arc breakpoints, flagged
/// singular points). Split points outside (a, b) are ignored.
QuadResult integrate_split(const std::function<double(double)>& f, double a, double b,
                           const std::vector<double>& splits, double tol = 1e-9,
                           int max_depth = 48);

} // namespace qwkb
