#pragma once

#include "qwkb/eigengrid.hpp"
#include "qwkb/simulate.hpp"

namespace qwkb {

/// WKB data phi_{m,s} for one eigenvalue branch, sampled on a uniform x-grid.
/// phi_s(x_lo) = 0 for every stored order. Off-grid evaluation is local cubic
/// Lagrange interpolation.
struct FormalJet {
    int branch = 0;
    std::vector<double> xs;
    std::vector<std::vector<Complex>> phi;  // phi[s][i]
    std::vector<bool> reliable;             // per order, derivative-noise guard

    int max_order() const { return static_cast<int>(phi.size()) - 1; }
    Complex eval(int s, double x) const;
    /// sum_{s<=S} phi_s(x) eps^s
    Complex Phi(double x, double eps, int max_s = -1) const;
};

struct WkbOptions {
    int grid_points = 1024;
    double quad_tol = 1e-11;
    double noise_guard = 1e-3;
};

/// Order-0 phase: phi_0(x) = int_{x_lo}^x log lambda_m(t) dt on the continuous
/// log branch. Requires the branch free of collision/vanishing flags inside I.
FormalJet phi0(const EpsilonEquation& eq, const EigenGrid& grid, int branch,
               const WkbOptions& opts = {});

/// Order-1 correction: the hierarchy's closed form
///   phi_1' = -[ (1/2) phi_0'' sum_j j^2 a_j lambda^j + P_eps ] / (sum_j j a_j lambda^j)
/// with exact partials for lambda' and exact P_eps. Fills order 1 of the jet.
void add_phi1(FormalJet& jet, const EpsilonEquation& eq, const EigenGrid& grid,
              const WkbOptions& opts = {});

/// Orders 2..s_max from the first-order differential hierarchy: the eps-series
/// of sum_j a_j(x, eps) psi(x+j eps)/psi(x) is built order by order with
/// grid-function coefficients; each phi_s' is solved for and integrated with
/// phi_s(x_lo) = 0. Derivatives of phi_t enter exactly for t <= 1 and via
/// spline differentiation above; the noise guard doubles the grid and marks
/// unreliable orders.
FormalJet phi_higher(const EpsilonEquation& eq, const EigenGrid& grid, int branch, int s_max,
                     const WkbOptions& opts = {});

/// Seed values exp(eps^{-1} (phi_0 + eps phi_1 + ...)) for k in [k0, k1].
std::vector<LogScaled> wkb_seed(const FormalJet& jet, double eps, long k0, long k1,
                                int max_order = -1);

/// Degree reduction by a known (dominant) solution: returns the tabulated
/// coefficients c_s(k eps, eps) = sum_{j>s} a_j(k eps, eps) psi(x+j eps)/psi(x)
/// of the equation of degree d-1 satisfied by the difference ratio.
struct DeflatedEquation {
    int d = 0;           // degree of the reduced equation
    double eps = 0.0;
    long k_first = 0;
    std::vector<std::vector<Complex>> c; // c[s][k - k_first], s = 0..d
    double zz_residual = 0.0;            // max relative residual of sum_j b_j = 0
    std::string provenance;

    CoefficientFn coefficient_fn() const;
    /// Roots of the reduced characteristic polynomial at step k.
    std::vector<Complex> char_roots_at(long k) const;
};

DeflatedEquation deflate(const EpsilonEquation& eq, double eps, const RecursionTrace& dominant,
                         double zz_tol = 1e-6);

/// Build the d x d basis matrix W(x) with rows the sample points x + i*eps and
/// columns the WKB seeds of the given jets, then decompose a trace at x.
DecomposeResult decompose_trace(const RecursionTrace& trace, const std::vector<FormalJet>& jets,
                                double x, const std::vector<Complex>* lambdas = nullptr);

} // namespace qwkb
