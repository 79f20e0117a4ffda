#pragma once

#include "gerbecalc/calculus/matrix_form.hpp"
#include "gerbecalc/calculus/random.hpp"

namespace gerbecalc::bundle {

using calculus::ExprMatrix;
using calculus::MatrixForm;
using calculus::Rng;

// Periodic U(n)-valued function: D(f) * prod_{a<b} G_ab(theta_ab) * D(h) with
// diagonal phases D and real Givens rotations G, all angles trigonometric.
ExprMatrix random_unitary(Rng& rng, int n, int dim, double amp);

// Periodic u(n)-valued 1-form sum_k M_k dx_k with anti-hermitian M_k.
MatrixForm random_antihermitian_1form(Rng& rng, int n, int dim, double amp);

// Random scalar form of the given degree with complex trigonometric
// coefficients; used for the odd forms of generators.
MatrixForm random_scalar_form(Rng& rng, int degree, int dim, double amp);

// Sum of random scalar forms of every odd degree <= dim.
MatrixForm random_odd_form(Rng& rng, int dim, double amp);

}  // namespace gerbecalc::bundle
