#include <gtest/gtest.h>

#include "gerbecalc/bundle/bundle.hpp"
#include "gerbecalc/calculus/matrix_form.hpp"
#include "gerbecalc/chern/chern.hpp"
#include "gerbecalc/deligne/gerbe.hpp"
#include "gerbecalc/ktheory/ktheory.hpp"

using namespace gerbecalc;
using namespace gerbecalc::ktheory;
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
  c.per_class = 30;
  c.seed = 8;
  return c;
}

struct Fixture {
  GerbePtr g = deligne::make_coboundary_gerbe(torus(2), 3, calculus::MatrixForm(1));
  bundle::BundleConn e = bundle::gauge_bundle(
      bundle::direct_sum(bundle::make_line_bundle(g, 1), bundle::make_line_bundle(g, -1)), 2);
  ConnPtr c1 = bundle::perturb_connection(e.conn, 1, 0.3);
  ConnPtr c2 = bundle::perturb_connection(e.conn, 2, 0.3);
  PointForm w = deligne::global_form(parse_form("(0.1*sin(2*pi*x2)) dx1"));
  PointForm v = deligne::global_form(parse_form("(0.2*cos(2*pi*x1)) dx2"));
  PointForm theta = deligne::global_form(parse_form("(0.05*sin(2*pi*(x1+x2)))"));

  HexagonInput hexagon() const {
    HexagonInput in;
    in.e = make_generator(c1, w, "E");
    in.f = make_generator(c2, v, "F");
    in.stabilizer = bundle::make_trivial_bundle(g, 1).conn;
    in.phi = bundle::random_automorphism(bundle::direct_sum(e.bundle, in.stabilizer->bundle), 4);
    in.theta = theta;
    return in;
  }
};

}  // namespace

TEST(KTheory, MapsOnSimpleGenerators) {
  Fixture f;
  const FormalDifference x{make_generator(f.c1, f.w, "a"), make_generator(f.c2, f.v, "b")};
  const auto [plus, minus] = map_I(x);
  EXPECT_EQ(plus->rank, 2);
  EXPECT_EQ(minus->rank, 2);
  const Generator a = map_a(f.g, f.theta);
  EXPECT_EQ(a.bundle()->rank, 0);
  // R of (E, G, 0) is ch(G).
  const PointForm r = generator_R(make_generator(f.c1, chern::zero_form(), "z"));
  EXPECT_LT(chern::difference(r, chern::ch_form(f.c1), *f.g->cover, cfg(), "R").max, 1e-15);
}

TEST(KTheory, SumAddsRanks) {
  Fixture f;
  const Generator s = generator_sum(make_generator(f.c1, f.w, "a"), make_generator(f.c2, f.v, "b"));
  EXPECT_EQ(s.bundle()->rank, 4);
}

TEST(KTheory, HexagonIdentitiesHold) {
  Fixture f;
  const ResidualReport r = hexagon_suite(f.hexagon(), cfg());
  for (const char* name : {"ch_I_vs_R", "R_a", "kernel_certificate", "kernel_iso", "kernel_exact", "I_a"})
    ASSERT_NE(find_residual(r, name), nullptr) << name;
  EXPECT_LT(worst(r), 1e-7);
}

TEST(KTheory, HexagonDetectsNonClosedDefect) {
  Fixture f;
  HexagonInput in = f.hexagon();
  in.omega_defect = deligne::global_form(parse_form("(0.01*sin(2*pi*x2)) dx1"));
  EXPECT_GT(find_residual(hexagon_suite(in, cfg()), "kernel_exact")->max, 1e-3);
}

TEST(KTheory, CertificatesVerify) {
  Fixture f;
  const Generator g = make_generator(f.c1, f.w, "g");
  EXPECT_LT(worst(verify_certificate(g, g, reflexive_certificate(g), cfg())), 1e-10);
  const auto [g2, cert] = gauge_equivalent(g, bundle::random_automorphism(f.e.bundle, 3));
  EXPECT_LT(worst(verify_certificate(g, g2, cert, cfg())), 1e-8);
}

TEST(KTheory, WrongOmegaBreaksCertificate) {
  Fixture f;
  const Generator g = make_generator(f.c1, f.w, "g");
  const Generator h = make_generator(f.c1, f.v, "h");
  EXPECT_GT(find_residual(verify_certificate(g, h, reflexive_certificate(g), cfg()), "certificate")->max, 1e-3);
}

TEST(KTheory, ChainComposesCertificates) {
  Fixture f;
  const Chain ch = chain_certificates(make_generator(f.c1, f.w, "g"), f.c2, bundle::perturb_connection(f.e.conn, 9, 0.3), 12);
  EXPECT_LT(worst(verify_certificate(ch.g1, ch.g3, ch.c13, cfg(), 12)), 1e-6);
}

TEST(KTheory, TwistCompatibility) {
  Fixture f;
  const FormalDifference x{make_generator(f.c1, f.w, "a"), make_generator(f.c2, f.v, "b")};
  auto alpha = std::make_shared<const deligne::DeligneOne>(deligne::DeligneOne::random(f.g->cover, 5));
  const auto xi = parse_form("(0.2*sin(2*pi*x1)) dx1^dx2");
  const ResidualReport r = twist_compat(x, alpha, deligne::apply_twist_morphism(f.g, alpha), xi,
                                        deligne::shift_by_xi(f.g, xi), f.theta, cfg());
  for (const char* name : {"I_Xi", "R_Xi", "Xi_a", "I_phi", "R_phi"}) ASSERT_NE(find_residual(r, name), nullptr);
  EXPECT_LT(worst(r), 1e-7);
}

TEST(KTheory, RIsInvariantOnlyUpToFactorTwo) {
  // Gauge-type certificates leave R unchanged. Along a chain certificate
  // between different connections R moves by 2 (ch G1 - ch G2).
  Fixture f;
  const auto& cov = *f.g->cover;
  const Generator g = make_generator(f.c1, f.w, "g");
  const auto [gauged, cert] = gauge_equivalent(g, bundle::random_automorphism(f.e.bundle, 3));
  EXPECT_LT(chern::difference(generator_R(g), generator_R(gauged), cov, cfg(), "R").max, 1e-8);

  const Chain ch = chain_certificates(g, f.c2, bundle::perturb_connection(f.e.conn, 9, 0.3), 12);
  const PointForm dR = chern::sum_form(generator_R(ch.g1), generator_R(ch.g2), -1.0);
  const PointForm dch = chern::sum_form(chern::ch_form(f.c1), chern::ch_form(f.c2), -1.0);
  EXPECT_GT(chern::difference(dR, chern::zero_form(), cov, cfg(), "dR").max, 1e-3);
  EXPECT_LT(chern::difference(dR, chern::sum_form(dch, dch), cov, cfg(), "2dch").max, 1e-8);
}
