#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gerbecalc/bundle/bundle.hpp"
#include "gerbecalc/calculus/matrix_form.hpp"
#include "gerbecalc/chern/chern.hpp"
#include "gerbecalc/deligne/gerbe.hpp"
#include "gerbecalc/error.hpp"

using namespace gerbecalc;
using namespace gerbecalc::chern;
using bundle::BundleConn;
using calculus::MatrixForm;
using calculus::parse_form;
using deligne::GerbePtr;

namespace {

constexpr double kPi = std::numbers::pi;

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
  c.per_class = 40;
  c.seed = 6;
  return c;
}

BundleConn rank_two(const GerbePtr& g, std::uint64_t seed) {
  return bundle::gauge_bundle(bundle::direct_sum(bundle::make_line_bundle(g, 1), bundle::make_line_bundle(g, -1)), seed);
}

}  // namespace

TEST(Chern, LineCurvatureMatchesSymbolicOracle) {
  // R = d(-2 pi i k x2 dx1) = 2 pi i k dx1^dx2 on the trivial gerbe.
  const GerbePtr g = deligne::make_trivial_gerbe(torus(2));
  for (int k = -2; k <= 2; ++k) {
    const BundleConn l = bundle::make_line_bundle(g, k);
    for (double x : {0.1, 0.5, 0.9}) {
      const EvalPoint p = locate(*g->cover, {x, 1.0 - x}, 0);
      const auto c = ch_m(*l.conn, p, 1).coeff(0b11).value();
      EXPECT_NEAR(c.real(), 0.0, 1e-12);
      EXPECT_NEAR(c.imag(), 2 * kPi * k, 1e-12);
      EXPECT_NEAR(ch_total(*l.conn, p).coeff(0).value().real(), 1.0, 1e-15);
    }
  }
}

TEST(Chern, ChernNumbersAreIntegers) {
  for (auto g : {deligne::make_trivial_gerbe(torus(2)),
                 deligne::make_coboundary_gerbe(torus(2), 4, parse_form("(0.3*sin(2*pi*x1)) dx1^dx2"))})
    for (int k = -2; k <= 2; ++k) {
      const ConnPtr c = bundle::perturb_connection(bundle::make_line_bundle(g, k).conn, 7, 0.3);
      EXPECT_NEAR(chern_number(c), k, 1e-8);
    }
}

TEST(Chern, TrivialBundleHasConstantCharacter) {
  const BundleConn t = bundle::make_trivial_bundle(deligne::make_trivial_gerbe(torus(3)), 3);
  const EvalPoint p = locate(t.bundle->cover(), {0.3, 0.3, 0.3}, 1);
  const FormJet ch = ch_total(*t.conn, p);
  EXPECT_NEAR(ch.coeff(0).value().real(), 3.0, 1e-15);
  EXPECT_LT((ch - ch.degree_part(0)).max_abs(), 1e-15);
}

TEST(Chern, CharacterGluesAndIsClosed) {
  for (int dim : {2, 3}) {
    const GerbePtr g = deligne::make_coboundary_gerbe(torus(dim), 2, parse_form("(0.2*sin(2*pi*x2)) dx1^dx2"));
    const ConnPtr c = bundle::perturb_connection(rank_two(g, 3).conn, 4, 0.3);
    EXPECT_LT(worst(check_ch_glue(c, cfg())), 1e-8);
    EXPECT_LT(worst(check_ch_closed(c, cfg())), 1e-7);
  }
}

TEST(Chern, AdditiveOnSums) {
  const GerbePtr g = deligne::make_coboundary_gerbe(torus(2), 2, MatrixForm(1));
  const ConnPtr a = bundle::perturb_connection(rank_two(g, 1).conn, 1, 0.3);
  const ConnPtr b = bundle::make_line_bundle(g, 2).conn;
  EXPECT_LT(worst(check_ch_additive(a, b, cfg())), 1e-10);
}

TEST(Chern, TransgressionConvergesWithNodes) {
  const GerbePtr g = deligne::make_coboundary_gerbe(torus(2), 5, MatrixForm(1));
  const BundleConn e = rank_two(g, 2);
  const ConnPtr path = bundle::eased_path(bundle::perturb_connection(e.conn, 1, 0.3), bundle::perturb_connection(e.conn, 2, 0.3));
  const double coarse = worst(check_transgression(path, cfg(), 4));
  const double fine = worst(check_transgression(path, cfg(), 16));
  EXPECT_LT(fine, 1e-10);
  EXPECT_GT(coarse / fine, 1e3);
}

TEST(Chern, BigonAndGaugeInvariance) {
  const GerbePtr g = deligne::make_coboundary_gerbe(torus(2), 6, MatrixForm(1));
  const BundleConn e = rank_two(g, 3);
  const ConnPtr a = bundle::perturb_connection(e.conn, 1, 0.3), b = bundle::perturb_connection(e.conn, 2, 0.3);
  const ConnPtr alpha = bundle::eased_path(a, b), gamma = bundle::detour_path(a, b, 8, 0.4);
  EXPECT_LT(worst(check_bigon(alpha, gamma, cfg(), 12)), 1e-8);
  EXPECT_LT(worst(check_cs_gauge(alpha, bundle::random_automorphism(e.bundle, 5), cfg(), 12)), 1e-8);
}

TEST(Chern, BigonRejectsPathsWithDifferentEndpoints) {
  const GerbePtr g = deligne::make_coboundary_gerbe(torus(2), 6, MatrixForm(1));
  const BundleConn e = rank_two(g, 3);
  const ConnPtr a = bundle::perturb_connection(e.conn, 1, 0.3), b = bundle::perturb_connection(e.conn, 2, 0.3);
  const ConnPtr c = bundle::perturb_connection(e.conn, 3, 0.3);
  EXPECT_THROW(check_bigon(bundle::eased_path(a, b), bundle::eased_path(a, c), cfg(), 8), PreconditionError);
}

TEST(Chern, RescalingByClosedForm) {
  const GerbePtr g = deligne::make_coboundary_gerbe(torus(3), 1, MatrixForm(1));
  const ConnPtr c = bundle::perturb_connection(rank_two(g, 1).conn, 2, 0.3);
  EXPECT_LT(worst(check_ch_rescale(c, parse_form("(0.4*cos(2*pi*x3)) dx1^dx2"), cfg())), 1e-7);
}

TEST(Chern, StokesAlongTheFiber) {
  const auto c = torus(2);
  EXPECT_THROW(check_stokes(parse_form("(t) dx1 + (1) dx1^dx2"), *c, cfg()), PreconditionError);
  EXPECT_LT(worst(check_stokes(parse_form("(sin(2*pi*x1)*t^3) dx1^dx2 + (t*cos(2*pi*x2)) dx1^dt"), *c, cfg())), 1e-10);
}

TEST(Chern, IntegrateCycleMatchesAverage) {
  // Average of cos^2 over a period is 1/2.
  const auto c = torus(2);
  const PointForm f = deligne::global_form(parse_form("(cos(2*pi*x1)^2) dx1"));
  EXPECT_NEAR(integrate_cycle(f, *c, {0}, {0.0, 0.3}, 32).real(), 0.5, 1e-14);
}

TEST(Chern, ExpFormOfConstantTwoForm) {
  const auto c = torus(2);
  const PointForm e = exp_form(parse_form("(0.25) dx1^dx2"), 2, -1.0);
  const FormJet v = e(locate(*c, {0.2, 0.2}, 0));
  EXPECT_NEAR(v.coeff(0).value().real(), 1.0, 1e-15);
  EXPECT_NEAR(v.coeff(0b11).value().real(), -0.25, 1e-15);
}
