#include "gerbecalc/bundle/field.hpp"

#include <bit>

namespace gerbecalc::bundle {

using calculus::Complex;
using calculus::ScalarExpr;

namespace {

const ScalarExpr kI(Complex(0.0, 1.0));

ExprMatrix phase_diag(Rng& rng, int n, int dim, double amp) {
  ExprMatrix d(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) d(a, b) = 0.0;
  for (int a = 0; a < n; ++a) d(a, a) = exp(kI * calculus::random_trig(rng, dim, amp));
  return d;
}

}  // namespace

ExprMatrix random_unitary(Rng& rng, int n, int dim, double amp) {
  ExprMatrix u = phase_diag(rng, n, dim, amp);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const ScalarExpr theta = calculus::random_trig(rng, dim, amp);
      ExprMatrix g = ExprMatrix::identity(n);
      g(a, a) = cos(theta);
      g(a, b) = -sin(theta);
      g(b, a) = sin(theta);
      g(b, b) = cos(theta);
      u = u * g;
    }
  if (n > 1) u = u * phase_diag(rng, n, dim, amp);
  return u;
}

MatrixForm random_antihermitian_1form(Rng& rng, int n, int dim, double amp) {
  MatrixForm out(n);
  for (int k = 0; k < dim; ++k) {
    ExprMatrix m(n);
    for (int a = 0; a < n; ++a) {
      m(a, a) = kI * calculus::random_trig(rng, dim, amp);
      for (int b = a + 1; b < n; ++b) {
        const ScalarExpr re = calculus::random_trig(rng, dim, amp);
        const ScalarExpr im = calculus::random_trig(rng, dim, amp);
        m(a, b) = re + kI * im;
        m(b, a) = -re + kI * im;
      }
    }
    out.add_term({k}, m);
  }
  return out;
}

MatrixForm random_scalar_form(Rng& rng, int degree, int dim, double amp) {
  MatrixForm out(1);
  for (unsigned mask = 0; mask < (1u << dim); ++mask) {
    if (std::popcount(mask) != degree) continue;
    MatrixForm::Key key;
    for (int a = 0; a < dim; ++a)
      if (mask & (1u << a)) key.push_back(a);
    const ScalarExpr re = calculus::random_trig(rng, dim, amp);
    const ScalarExpr im = calculus::random_trig(rng, dim, amp);
    out.add_term(key, ExprMatrix::scalar(re + kI * im));
  }
  return out;
}

MatrixForm random_odd_form(Rng& rng, int dim, double amp) {
  MatrixForm out(1);
  for (int q = 1; q <= dim; q += 2) out = out + random_scalar_form(rng, q, dim, amp);
  return out;
}

}  // namespace gerbecalc::bundle
