#include <gtest/gtest.h>

#include <cmath>

#include "gerbecalc/bundle/bundle.hpp"
#include "gerbecalc/bundle/field.hpp"
#include "gerbecalc/calculus/matrix_form.hpp"
#include "gerbecalc/deligne/gerbe.hpp"
#include "gerbecalc/error.hpp"

using namespace gerbecalc;
using namespace gerbecalc::bundle;
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

SampleConfig cfg() {
  SampleConfig c;
  c.per_class = 60;
  c.seed = 2;
  return c;
}

GerbePtr coboundary(int dim, std::uint64_t seed = 3) {
  return deligne::make_coboundary_gerbe(torus(dim), seed, parse_form("(0.2*cos(2*pi*x2)) dx1^dx2"));
}

}  // namespace

TEST(Field, RandomUnitaryIsUnitary) {
  calculus::Rng rng(17);
  const auto u = random_unitary(rng, 3, 2, 0.8);
  const calculus::EvalPoint p = calculus::make_point(0, {0.31, 0.77}, 0);
  const JetMatrix m = u.eval(p);
  const JetMatrix id = m * m.adjoint();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(std::abs(id(r, c).value() - (r == c ? 1.0 : 0.0)), 0.0, 1e-14);
}

TEST(Field, RandomOneFormIsAntiHermitian) {
  calculus::Rng rng(5);
  const MatrixForm a = random_antihermitian_1form(rng, 2, 3, 0.5);
  const auto f = a.eval(calculus::make_point(0, {0.1, 0.2, 0.3}, 0));
  EXPECT_LT((f + f.adjoint()).max_abs(), 1e-15);
}

TEST(Bundle, BuildersProduceValidBundles) {
  for (int dim : {2, 3}) {
    const GerbePtr g = coboundary(dim);
    const BundleConn l = make_line_bundle(g, 2);
    const BundleConn m = make_line_bundle(g, -1);
    const BundleConn s = direct_sum(l, m);
    const BundleConn q = gauge_bundle(s, 4);
    for (const auto* b : {&l, &m, &s, &q}) {
      EXPECT_LT(worst(validate_bundle(*b->bundle, cfg())), 1e-11) << dim << " " << b->bundle->id;
      EXPECT_LT(worst(validate_connection(*b->conn, cfg())), 1e-10) << dim << " " << b->bundle->id;
    }
    EXPECT_EQ(s.bundle->rank, 2);
  }
}

TEST(Bundle, TransitionInverseAndIdentity) {
  const BundleConn s = gauge_bundle(direct_sum(make_line_bundle(coboundary(2), 1), make_trivial_bundle(coboundary(2), 1)), 1);
  const auto& cov = s.bundle->cover();
  const auto& e = cov.simplices(1)[3];
  const auto sp = cov.sample_points(e, 1, 7)[0];
  const auto p = deligne::sample_eval_point(e, sp, 0, 0);
  const JetMatrix prod = s.bundle->g_at(e[1], e[0], p) * s.bundle->g_at(e[0], e[1], p);
  EXPECT_LT(matrix_residual(prod - JetMatrix::identity(2, p.nvars(), 0)), 1e-14);
}

TEST(Bundle, PerturbationKeepsCompatibility) {
  const BundleConn s = gauge_bundle(direct_sum(make_line_bundle(coboundary(2), 1), make_line_bundle(coboundary(2), 0)), 2);
  EXPECT_LT(worst(validate_connection(*perturb_connection(s.conn, 6, 0.5), cfg())), 1e-10);
}

TEST(Bundle, SumOfBundlesOverDifferentGerbesIsRejected) {
  const BundleConn a = make_line_bundle(coboundary(2, 1), 1);
  const BundleConn b = make_line_bundle(coboundary(2, 2), 1);
  EXPECT_THROW(direct_sum(a.bundle, b.bundle), PreconditionError);
}

TEST(Bundle, RandomAutomorphismIntertwines) {
  const BundleConn s = gauge_bundle(direct_sum(make_line_bundle(coboundary(2), 1), make_line_bundle(coboundary(2), -1)), 5);
  const MorphismPtr phi = random_automorphism(s.bundle, 9);
  EXPECT_LT(worst(validate_morphism(*phi, *s.bundle, *s.bundle, cfg())), 1e-12);
  const MorphismPtr round = compose(phi, std::make_shared<const BundleMorphism>(phi->inverse()));
  const auto p = calculus::make_point(2, {0.5, 0.2}, 0);
  EXPECT_LT(matrix_residual(round->at(2, p) - JetMatrix::identity(2, 2, 0)), 1e-14);
}

TEST(Bundle, TransportAlongTwistIsValid) {
  const auto c = torus(2);
  const GerbePtr g = deligne::make_coboundary_gerbe(c, 4, MatrixForm(1));
  auto a = std::make_shared<const deligne::DeligneOne>(deligne::DeligneOne::random(c, 12, 0.4));
  const GerbePtr t = deligne::apply_twist_morphism(g, a);
  const BundleConn e = transport_twist(gauge_bundle(make_line_bundle(g, 1), 1), a, t);
  EXPECT_LT(worst(validate_bundle(*e.bundle, cfg())), 1e-11);
  EXPECT_LT(worst(validate_connection(*e.conn, cfg())), 1e-10);
}

TEST(Bundle, PathsInterpolateEndpoints) {
  const BundleConn s = gauge_bundle(direct_sum(make_line_bundle(coboundary(2), 1), make_line_bundle(coboundary(2), 0)), 2);
  const ConnPtr g1 = perturb_connection(s.conn, 3, 0.4);
  for (const ConnPtr& path : {affine_path(s.conn, g1), eased_path(s.conn, g1), detour_path(s.conn, g1, 4, 0.3)}) {
    EXPECT_TRUE(path->parametric);
    EXPECT_LT(worst(validate_connection(*path, cfg(), {0.0, 0.5, 1.0})), 1e-10);
    const auto p = calculus::make_point(1, {0.4, 0.1}, 0);
    EXPECT_LT((path_at(path, 0.0)->at(p) - s.conn->at(p)).max_abs(), 1e-14);
    EXPECT_LT((path_at(path, 1.0)->at(p) - g1->at(p)).max_abs(), 1e-14);
  }
}

TEST(Bundle, LineConnectionMatchesClosedForm) {
  // Gamma_i = -2 pi i k x2 dx1 on the trivial gerbe.
  const BundleConn l = make_line_bundle(deligne::make_trivial_gerbe(torus(2)), 3);
  const auto p = calculus::make_point(4, {0.45, 0.52}, 0);
  const auto c = l.conn->at(p).coeff(0b01).value();
  EXPECT_NEAR(c.real(), 0.0, 1e-15);
  EXPECT_NEAR(c.imag(), -2 * M_PI * 3 * 0.52, 1e-13);
}
