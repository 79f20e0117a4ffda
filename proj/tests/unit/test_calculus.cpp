#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gerbecalc/calculus/eval_point.hpp"
#include "gerbecalc/calculus/expr.hpp"
#include "gerbecalc/calculus/form.hpp"
#include "gerbecalc/calculus/matrix_form.hpp"
#include "gerbecalc/calculus/quadrature.hpp"
#include "gerbecalc/calculus/random.hpp"
#include "gerbecalc/error.hpp"

using namespace gerbecalc;
using namespace gerbecalc::calculus;

namespace {

constexpr double kPi = std::numbers::pi;


}  // namespace

TEST(Jet, ProductAndChainRuleMatchClosedForm) {
  // f = sin(x) exp(y): derivatives in closed form.
  const double x = 0.37, y = -0.21;
  const Jet X = Jet::variable(x, 0, 2, 2), Y = Jet::variable(y, 1, 2, 2);
  const Jet f = jet_sin(X) * jet_exp(Y);
  EXPECT_NEAR(f.value().real(), std::sin(x) * std::exp(y), 1e-15);
  EXPECT_NEAR(f.partial(0).real(), std::cos(x) * std::exp(y), 1e-15);
  EXPECT_NEAR(f.partial(1).real(), std::sin(x) * std::exp(y), 1e-15);
  EXPECT_NEAR(f.second(0, 0).real(), -std::sin(x) * std::exp(y), 1e-14);
  EXPECT_NEAR(f.second(0, 1).real(), std::cos(x) * std::exp(y), 1e-14);
}

TEST(Jet, ReciprocalInvertsProduct) {
  const Jet X = Jet::variable(0.8, 0, 1, 4);
  const Jet g = jet_cos(X) + Complex(2.0);
  const Jet one = g * g.reciprocal();
  EXPECT_NEAR(std::abs(one.value() - 1.0), 0.0, 1e-15);
  for (int i = 1; i < one.table().size(); ++i) EXPECT_NEAR(std::abs(one.coeff(i)), 0.0, 1e-14);
}

TEST(Jet, PartialBelowOrderOneThrows) {
  const Jet c = Jet::constant(1.0, 2, 0);
  EXPECT_THROW(c.partial(0), PreconditionError);
}

TEST(Expr, ParsedExpressionMatchesStdMath) {
  const ScalarExpr e = parse_expr("exp(sin(2*pi*x1)) * cos(x2)^2 - 1/(2 + x1)");
  const EvalPoint p = make_point(0, {0.3, 1.1}, 0);
  const double want = std::exp(std::sin(2 * kPi * 0.3)) * std::pow(std::cos(1.1), 2) - 1.0 / 2.3;
  EXPECT_NEAR(e.value_at(p).real(), want, 1e-14);
}

TEST(Expr, MalformedInputReportsOffset) {
  try {
    parse_expr("sin(x1 + )");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GT(e.offset(), 0u);
  }
  EXPECT_THROW(parse_expr("foo(x1)"), ParseError);
}

TEST(Expr, DivisionByZeroIsAnEvalError) {
  const ScalarExpr e = parse_expr("1/(x1 - 0.5)");
  EXPECT_THROW(e.value_at(make_point(0, {0.5}, 0)), EvalError);
}

TEST(Form, ExteriorDerivativeSquaresToZero) {
  const MatrixForm w = parse_form("(sin(2*pi*x1)*x2) dx3 + (exp(x3)*cos(x1)) dx1^dx2 + (x1*x2*x3)");
  const EvalPoint p = make_point(0, {0.2, 0.4, 0.7}, 3);
  const FormJet dd = exterior_d(exterior_d(w.eval(p)));
  EXPECT_LT(dd.truncated(0).max_abs(), 1e-13);
}

TEST(Form, DerivativeOfOneFormMatchesHandComputation) {
  // d(x1^2 x2 dx1) = -x1^2 dx1^dx2.
  const MatrixForm w = parse_form("(x1^2*x2) dx1");
  const EvalPoint p = make_point(0, {0.6, 0.9}, 1);
  const FormJet d = exterior_d(w.eval(p));
  EXPECT_NEAR(d.coeff(0b11).value().real(), -0.36, 1e-15);
}

TEST(Form, WedgeIsGradedCommutative) {
  const EvalPoint p = make_point(0, {0.1, 0.2, 0.3}, 1);
  const FormJet a = parse_form("(x1) dx1 + (2) dx2").eval(p);
  const FormJet b = parse_form("(x3) dx3 + (1) dx1").eval(p);
  const FormJet ab = wedge(a, b), ba = wedge(b, a);
  EXPECT_LT((ab + ba).truncated(0).max_abs(), 1e-15);
  EXPECT_EQ(wedge_sign(0b01, 0b10), 1);
  EXPECT_EQ(wedge_sign(0b10, 0b01), -1);
}

TEST(Form, ExpOfTwoFormTruncatesAtTopDegree) {
  const EvalPoint p = make_point(0, {0.1, 0.2}, 0);
  const FormJet xi = parse_form("(0.5) dx1^dx2").eval(p);
  const FormJet e = exp_even_form(xi, 2);
  EXPECT_NEAR(e.coeff(0).value().real(), 1.0, 1e-15);
  EXPECT_NEAR(e.coeff(0b11).value().real(), 0.5, 1e-15);
}

TEST(Form, RepeatedBasisElementIsRejected) {
  EXPECT_THROW(parse_form("(1) dx1^dx1"), ParseError);
  EXPECT_THROW(parse_form("(1) dx1 dx2 (2)"), ParseError);
  EXPECT_EQ(parse_form("(1) dx2^dx1 + (x1) dx1^dx2").degree(), 2);
}

TEST(Quadrature, GaussLegendreIsExactToDegreeTwoNMinusOne) {
  for (int n : {1, 2, 4, 8, 16}) {
    const QuadratureRule& r = gauss_legendre(n);
    double wsum = 0, moment = 0;
    for (int i = 0; i < n; ++i) {
      wsum += r.weights[i];
      moment += r.weights[i] * std::pow(r.nodes[i], 2 * n - 1);
    }
    EXPECT_NEAR(wsum, 1.0, 1e-14);
    EXPECT_NEAR(moment, 1.0 / (2 * n), 1e-14) << n;
  }
}

TEST(Quadrature, FiberIntegralOfTSquaredDt) {
  const MatrixForm w = parse_form("(t^2*x1) dx1^dt + (t) dx1");
  const EvalPoint p = make_point(0, {0.5}, 1);
  const FormJet i = fiber_integrate_I(w, p, 4);
  // Only the dt component survives: int t^2 x1 dt = x1 / 3.
  EXPECT_NEAR(i.coeff(0b1).value().real(), 0.5 / 3.0, 1e-15);
}

TEST(Quadrature, SmoothIntegrandConvergesSpectrally) {
  const MatrixForm w = parse_form("(exp(t)) dt");
  const EvalPoint p = make_point(0, {0.0}, 0);
  const double exact = std::exp(1.0) - 1.0;
  EXPECT_NEAR(fiber_integrate_I(w, p, 8).coeff(0).value().real(), exact, 1e-14);
  EXPECT_GT(std::abs(fiber_integrate_I(w, p, 1).coeff(0).value().real() - exact), 1e-3);
}

TEST(Random, DerivedSeedsAreDeterministicAndDistinct) {
  EXPECT_EQ(Rng::derive_seed("a", 1), Rng::derive_seed("a", 1));
  EXPECT_NE(Rng::derive_seed("a", 1), Rng::derive_seed("b", 1));
  EXPECT_NE(Rng::derive_seed("a", 1), Rng::derive_seed("a", 2));
  Rng r1(5), r2(5);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(r1.uniform(), r2.uniform());
}

TEST(Random, TrigPolynomialIsPeriodic) {
  Rng rng(3);
  const ScalarExpr f = random_trig(rng, 2, 0.5);
  const double a = f.value_at(make_point(0, {0.3, 0.6}, 0)).real();
  const double b = f.value_at(make_point(0, {1.3, -0.4}, 0)).real();
  EXPECT_NEAR(a, b, 1e-13);
}
