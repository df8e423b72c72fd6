#pragma once

#include "qwkb/entropy.hpp"
#include "qwkb/epsilon.hpp"

namespace qwkb {
namespace builtins {

/// Second-order operator annihilating the trefoil colored Jones function.
const std::string& trefoil_text();
/// Third-order operator for the figure-eight knot.
const std::string& figure8_text();

QOperator trefoil();
QOperator figure8();

/// A-polynomials in (L, M): L exponents in the first slot, M in the second.
/// These are the minimal cleared forms of the classical specializations.
BiPoly trefoil_apoly();
BiPoly figure8_apoly();

/// psi(x+2e) = (3+x) psi(x+e) - (2+x) psi(x): eigenvalues 2+x and 1 on [0,1].
EpsilonEquation synthetic_2x();
/// psi(x+e) = (2+x) psi(x) on [0,1].
EpsilonEquation synthetic_firstorder();
/// Constant coefficients, eigenvalues {2, 1/2}, on [0,1].
EpsilonEquation const_d2();
/// Eigenvalues {2+x, 1+x/2, 1} on [0,1] (deflation and transfer-probe fodder).
EpsilonEquation synthetic_d3();

/// Builtin names the CLI accepts.
std::vector<std::string> names();
bool is_builtin(const std::string& name);

/// Write the .qop corpus files (trefoil.qop, figure8.qop) into a directory.
void write_corpus(const std::string& dir);

} // namespace builtins
} // namespace qwkb
