#pragma once

#include <vector>

#include "qwkb/rational.hpp"

namespace qwkb {

/// Simultaneous-iteration (Aberth-Ehrlich) root finder for dense complex
/// polynomials, with Newton polishing. Coefficients ascending: p = sum c[j] z^j.
struct RootSolveResult {
    std::vector<Complex> roots;
    double max_residual = 0.0;     // max |p(root)| / residual_scale
    bool converged = false;
};

Complex poly_eval(const std::vector<Complex>& c, Complex z);
Complex poly_eval_derivative(const std::vector<Complex>& c, Complex z);

/// Residual scale sum_j |c_j| max(1, |z|)^j used for relative residual tests.
double residual_scale(const std::vector<Complex>& c, Complex z);

/// Find all roots (with multiplicity). If seeds are given they are used as the
/// starting configuration (continuation); otherwise scaled-circle seeds.
/// rel_tol is the relative residual target; near-multiple roots are accepted
/// once below accept_tol.
RootSolveResult find_roots(const std::vector<Complex>& coeffs,
                           const std::vector<Complex>* seeds = nullptr,
                           double rel_tol = 1e-13, double accept_tol = 1e-9,
                           int max_iter = 200);

/// Newton-polish a single root from a nearby seed (used for off-grid branch
/// evaluation); returns the polished root.
Complex polish_root(const std::vector<Complex>& coeffs, Complex seed, int steps = 4);

} // namespace qwkb
