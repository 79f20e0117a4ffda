#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "gerbecalc/calculus/matrix_form.hpp"
#include "gerbecalc/cover/cover.hpp"
#include "gerbecalc/deligne/gerbe.hpp"
#include "gerbecalc/error.hpp"
#include "gerbecalc/nerve/nerve.hpp"
#include "support/snf_oracle.hpp"

using namespace gerbecalc;
using namespace gerbecalc::nerve;
using gerbecalc::oracle::determinantal_divisor;
using gerbecalc::oracle::random_matrix;

namespace {

std::shared_ptr<const cover::Cover> torus(int dim) {
  return std::make_shared<const cover::Cover>(cover::Cover::torus(dim, 3, 0.05));
}

}  // namespace

TEST(SNF, DiagonalExample) {
  IntMatrix m(2, 2);
  m(0, 0) = 2;
  m(1, 1) = 3;
  const SNF s = smith_normal_form(m);
  ASSERT_EQ(s.rank(), 2);
  EXPECT_EQ(s.diagonal[0], 1);
  EXPECT_EQ(s.diagonal[1], 6);
}

TEST(SNF, RandomMatricesReconstruct) {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const IntMatrix m = random_matrix(gen);
    const SNF s = smith_normal_form(m);
    const BigMatrix back = multiply(multiply(s.U, s.D), s.V);
    EXPECT_EQ(back.a, to_big(m).a) << trial;
    EXPECT_EQ(abs(determinant(s.U)), 1) << trial;
    EXPECT_EQ(abs(determinant(s.V)), 1) << trial;
    BigInt prod = 1;
    for (int k = 0; k < s.rank(); ++k) {
      EXPECT_GT(s.diagonal[k], 0);
      if (k > 0) EXPECT_EQ(s.diagonal[k] % s.diagonal[k - 1], 0);
      EXPECT_EQ(s.D(k, k), s.diagonal[k]);
      prod *= s.diagonal[k];
      EXPECT_EQ(prod, determinantal_divisor(m, k + 1)) << trial << " k=" << k;
    }
    if (s.rank() < std::min(m.rows, m.cols)) EXPECT_EQ(determinantal_divisor(m, s.rank() + 1), 0);
    // The sparse path must agree with the dense one.
    EXPECT_EQ(invariant_factors(m), s.diagonal) << trial;
  }
}

TEST(Cohomology, Circle) {
  const AbstractComplex k = AbstractComplex::circle();
  EXPECT_EQ(cohomology(k, 0).betti, 1);
  EXPECT_EQ(cohomology(k, 1).betti, 1);
  EXPECT_TRUE(cohomology(k, 1).torsion.empty());
}

TEST(Cohomology, ProjectivePlaneHasTwoTorsion) {
  const AbstractComplex k = AbstractComplex::rp2();
  EXPECT_EQ(cohomology(k, 0).betti, 1);
  EXPECT_EQ(cohomology(k, 1).betti, 0);
  const Cohomology h2 = cohomology(k, 2);
  EXPECT_EQ(h2.betti, 0);
  ASSERT_EQ(h2.torsion.size(), 1u);
  EXPECT_EQ(h2.torsion[0], 2);
  IntCochain z{2, std::vector<std::int64_t>(k.simplices(2).size(), 0)};
  z.values[0] = 1;
  EXPECT_EQ(torsion_order(k, z), BigInt(2));
}

TEST(Cohomology, TorusNerves) {
  const auto t2 = AbstractComplex::from_cover(*torus(2));
  EXPECT_EQ(cohomology(t2, 1).betti, 2);
  EXPECT_EQ(cohomology(t2, 2).betti, 1);
  EXPECT_EQ(cohomology(t2, 3).betti, 0);
  const auto t3 = AbstractComplex::from_cover(*torus(3));
  for (int q = 0; q <= 3; ++q) EXPECT_EQ(cohomology(t3, q).betti, q == 0 || q == 3 ? 1 : 3) << q;
}

TEST(Cohomology, ParseAndDegenerateDegrees) {
  const AbstractComplex k = AbstractComplex::parse("# two triangles sharing an edge\n0 1 2\n1 2 3\n");
  EXPECT_EQ(k.vertex_count(), 4);
  EXPECT_EQ(k.simplices(1).size(), 5u);
  EXPECT_EQ(cohomology(k, 0).betti, 1);
  EXPECT_EQ(cohomology(k, 1).betti, 0);
  EXPECT_TRUE(k.simplices(7).empty());
  EXPECT_THROW(AbstractComplex::parse("0 x 2\n"), ParseError);
}

TEST(Cochains, CoboundariesSolveAndNonCocyclesThrow) {
  const AbstractComplex k = AbstractComplex::circle();
  IntCochain y{0, {3, -1, 4}};
  const IntCochain z = coboundary(k, y);
  const auto sol = solve_coboundary(k, z);
  ASSERT_TRUE(sol.has_value());
  EXPECT_EQ(coboundary(k, *sol).values, z.values);
  EXPECT_EQ(torsion_order(k, z), BigInt(1));
  IntCochain gen{1, std::vector<std::int64_t>(k.simplices(1).size(), 0)};
  gen.values[0] = 1;
  EXPECT_FALSE(torsion_order(k, gen).has_value());
  EXPECT_FALSE(solve_coboundary(k, gen).has_value());
  const AbstractComplex disk = AbstractComplex::from_simplices({{0, 1, 2}});
  IntCochain edge{1, {1, 0, 0}};
  EXPECT_THROW(torsion_order(disk, edge), PreconditionError);
}

TEST(DixmierDouady, CoboundaryGerbesAreTrivial) {
  const auto c = torus(3);
  const auto k = AbstractComplex::from_cover(*c);
  const auto g = deligne::make_coboundary_gerbe(c, 7, calculus::MatrixForm(1));
  const DDResult dd = dd_cocycle(*g);
  EXPECT_LT(dd.max_fraction, 1e-6);
  EXPECT_EQ(torsion_order(k, dd.cocycle), BigInt(1));
}

TEST(DixmierDouady, TwistChangesCocycleByCoboundary) {
  const auto c = torus(2);
  const auto k = AbstractComplex::from_cover(*c);
  const auto g = deligne::make_coboundary_gerbe(c, 3, calculus::MatrixForm(1));
  auto a = std::make_shared<const deligne::DeligneOne>(deligne::DeligneOne::random(c, 4, 0.8));
  const DDResult d0 = dd_cocycle(*g), d1 = dd_cocycle(*deligne::apply_twist_morphism(g, a));
  IntCochain diff{3, {}};
  for (std::size_t i = 0; i < d0.cocycle.values.size(); ++i) diff.values.push_back(d1.cocycle.values[i] - d0.cocycle.values[i]);
  EXPECT_TRUE(solve_coboundary(k, diff).has_value());
}
