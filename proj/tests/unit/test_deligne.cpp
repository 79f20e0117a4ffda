#include <gtest/gtest.h>

#include <cmath>

#include "gerbecalc/calculus/matrix_form.hpp"
#include "gerbecalc/deligne/cochain.hpp"
#include "gerbecalc/deligne/gerbe.hpp"

using namespace gerbecalc;
using namespace gerbecalc::deligne;
using calculus::MatrixForm;
using calculus::parse_form;

namespace {

std::shared_ptr<const cover::Cover> torus(int dim) {
  return std::make_shared<const cover::Cover>(cover::Cover::torus(dim, 3, 0.05));
}

double worst(const ResidualReport& r) {
  double m = 0;
  for (const auto& x : r) m = std::max(m, x.max);
  return m;
}

SampleConfig cfg(int n = 60) {
  SampleConfig c;
  c.per_class = n;
  c.seed = 4;
  return c;
}

}  // namespace

TEST(Gerbe, TrivialGerbeSatisfiesAxiomsExactly) {
  const GerbePtr g = make_trivial_gerbe(torus(2));
  EXPECT_EQ(worst(validate_gerbe(*g, cfg())), 0.0);
}

TEST(Gerbe, CoboundaryGerbesSatisfyAxioms) {
  for (int dim : {2, 3})
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const GerbePtr g = make_coboundary_gerbe(torus(dim), seed, parse_form("(0.3*sin(2*pi*x1)) dx1^dx2"));
      EXPECT_LT(worst(validate_gerbe(*g, cfg())), 1e-10) << dim << " " << seed;
      EXPECT_LT(worst(check_curvature_H(*g, cfg())), 1e-10);
    }
}

TEST(Gerbe, AxiomReportCoversEveryCondition) {
  const GerbePtr g = make_coboundary_gerbe(torus(2), 1, MatrixForm(1));
  const ResidualReport r = validate_gerbe(*g, cfg(200));
  for (const char* name : {"normalization", "unit_modulus", "C1", "C2", "C3"}) {
    const Residual* x = find_residual(r, name);
    ASSERT_NE(x, nullptr) << name;
    EXPECT_GE(x->points, 200) << name;
  }
}

TEST(Gerbe, LambdaIsNormalizedUnderPermutation) {
  const GerbePtr g = make_coboundary_gerbe(torus(2), 2, MatrixForm(1));
  const auto& s = g->cover->simplices(2).front();
  const auto sp = g->cover->sample_points(s, 1, 3).front();
  const EvalPoint p = sample_eval_point(s, sp, 0, 0);
  const auto l = g->lambda_at(s[2], s[1], s[0], p).value();
  const auto swapped = g->lambda_at(s[1], s[2], s[0], p).value();
  EXPECT_NEAR(std::abs(l * swapped - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(g->lambda_at(s[0], s[0], s[1], p).value() - 1.0), 0.0, 1e-15);
}

TEST(Gerbe, DefectsBreakTheAxioms) {
  const GerbePtr g = make_coboundary_gerbe(torus(2), 3, MatrixForm(1));
  const ResidualReport b = validate_gerbe(*perturb_B(g, 0, parse_form("(0.01*sin(2*pi*x2)) dx1^dx2")), cfg());
  EXPECT_GT(find_residual(b, "C3")->max, 1e-4);
  const ResidualReport c = validate_gerbe(*conjugate_lambda(g), cfg());
  EXPECT_GT(worst(c), 1e-2);
}

TEST(Gerbe, TwistAndShiftPreserveAxioms) {
  const auto c = torus(2);
  const GerbePtr g = make_coboundary_gerbe(c, 5, MatrixForm(1));
  auto a = std::make_shared<const DeligneOne>(DeligneOne::random(c, 8, 0.5));
  EXPECT_LT(worst(validate_gerbe(*apply_twist_morphism(g, a), cfg())), 1e-10);
  EXPECT_LT(worst(validate_gerbe(*shift_by_xi(g, parse_form("(cos(2*pi*x2)) dx1^dx2")), cfg())), 1e-10);
}

TEST(Gerbe, TwistLeavesCurvatureUnchanged) {
  // H' = H + d d Pi = H.
  const auto c = torus(3);
  const GerbePtr g = make_coboundary_gerbe(c, 6, parse_form("(0.2*sin(2*pi*x3)) dx1^dx2"));
  auto a = std::make_shared<const DeligneOne>(DeligneOne::random(c, 9));
  const GerbePtr t = apply_twist_morphism(g, a);
  const EvalPoint p = calculus::make_point(4, {0.41, 0.22, 0.05}, 0);
  EXPECT_LT((g->H_at(p) - t->H_at(p)).max_abs(), 1e-12);
  // d(0.2 sin(2 pi x3) dx1^dx2) = 0.4 pi cos(2 pi x3) dx1^dx2^dx3.
  EXPECT_NEAR(g->H_at(p).coeff(0b111).value().real(), 0.4 * M_PI * std::cos(2 * M_PI * 0.05), 1e-12);
}

TEST(Cochain, DeltaSquaredVanishes) {
  const auto c = torus(2);
  const FormCochain f = random_cochain(0, 1, 2, 11);
  const FormCochain dd = delta(delta(f));
  double m = 0;
  for (const auto& s : c->simplices(2))
    for (const auto& sp : c->sample_points(s, 2, 1)) m = std::max(m, form_residual(dd.value(s, sample_eval_point(s, sp, 0, 1))));
  EXPECT_LT(m, 1e-13);
}

TEST(Cochain, TotalDifferentialSquaresToZero) {
  const auto c = torus(2);
  const TotalCochain x{random_cochain(0, 1, 2, 1), random_cochain(1, 0, 2, 2)};
  const TotalCochain dd = total_D(total_D(x));
  double m = 0;
  for (const auto& comp : dd) {
    if (comp.p > 2) continue;
    for (const auto& s : c->simplices(comp.p))
      for (const auto& sp : c->sample_points(s, 1, 5)) m = std::max(m, form_residual(comp.value(s, sample_eval_point(s, sp, 0, 2))));
  }
  EXPECT_LT(m, 1e-12);
}

TEST(Cochain, AlternatingExtensionFlipsSign) {
  const auto c = torus(2);
  const FormCochain f = random_cochain(1, 0, 2, 3);
  const auto& s = c->simplices(1)[4];
  const EvalPoint p = sample_eval_point(s, c->sample_points(s, 1, 2)[0], 0, 0);
  EXPECT_LT((f.at({s[0], s[1]}, p) + f.at({s[1], s[0]}, p)).max_abs(), 1e-15);
  EXPECT_EQ(f.at({s[0], s[0]}, p).max_abs(), 0.0);
}
