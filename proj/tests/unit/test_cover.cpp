#include <gtest/gtest.h>

#include <cmath>

#include "gerbecalc/cover/cover.hpp"

using namespace gerbecalc;
using namespace gerbecalc::cover;

namespace {

// Every pair of boxes meets on T^d with N = 3; a k-simplex is a set of k+1
// charts, so the counts are binomials when all intersections are nonempty.
long binom(int n, int k) {
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

TEST(Cover, ChartIndexRoundTrips) {
  const Cover c = Cover::torus(3, 3, 0.05);
  EXPECT_EQ(c.chart_count(), 27);
  for (int i = 0; i < c.chart_count(); ++i) EXPECT_EQ(c.chart_at(c.grid_index(i)), i);
}

TEST(Cover, CircleNerveHasOnlyAdjacentEdges) {
  const Cover c = Cover::torus(1, 4, 0.05);
  EXPECT_EQ(c.simplices(0).size(), 4u);
  EXPECT_EQ(c.simplices(1).size(), 4u);
  EXPECT_TRUE(c.simplices(2).empty());
  EXPECT_FALSE(c.contains({0, 2}));
}

TEST(Cover, TorusNerveCounts) {
  // T^3 with N = 3: each axis has 3 arcs that pairwise meet, but three arcs
  // never share a point, so a simplex is a product of at most 2 arcs per axis.
  const Cover c = Cover::torus(3, 3, 0.05);
  EXPECT_EQ(c.simplices(1).size(), static_cast<std::size_t>(binom(27, 2)));
  EXPECT_EQ(c.simplices(2).size(), 1188u);
  EXPECT_EQ(c.simplices(3).size(), 1809u);
}

TEST(Cover, SamplePointsLieInEveryMemberChart) {
  const Cover c = Cover::torus(2, 3, 0.05);
  for (const Simplex& s : c.simplices(2)) {
    for (const SamplePoint& sp : c.sample_points(s, 4, 9)) {
      ASSERT_EQ(sp.coords.size(), s.size());
      for (std::size_t k = 0; k < s.size(); ++k) EXPECT_TRUE(c.inside(s[k], sp.coords[k]));
      // Coordinates of different charts differ by a lattice vector.
      for (std::size_t k = 1; k < s.size(); ++k)
        for (int a = 0; a < c.dim(); ++a) {
          const double d = sp.coords[k][a] - sp.coords[0][a];
          EXPECT_NEAR(d, std::round(d), 1e-12);
        }
    }
  }
}

TEST(Cover, ShiftIsAntisymmetric) {
  const Cover c = Cover::torus(2, 3, 0.05);
  for (const Simplex& s : c.simplices(1)) {
    const auto a = c.shift(s[0], s[1]), b = c.shift(s[1], s[0]);
    for (int k = 0; k < 2; ++k) EXPECT_EQ(a[k], -b[k]);
  }
}

TEST(Cover, RefinementMapsChartsIntoTargets) {
  const Cover c = Cover::torus(2, 3, 0.06);
  CoverMap tau;
  const Cover f = c.refine(2, &tau);
  EXPECT_EQ(f.chart_count(), 36);
  EXPECT_DOUBLE_EQ(f.margin(), 0.03);
  for (int r = 0; r < f.chart_count(); ++r) {
    const Box& b = f.box(r);
    std::vector<double> lo = b.lo, hi = b.hi;
    for (int a = 0; a < 2; ++a) {
      lo[a] += tau.offset[r][a] + 1e-12;
      hi[a] += tau.offset[r][a] - 1e-12;
    }
    EXPECT_TRUE(c.inside(tau.chart[r], lo));
    EXPECT_TRUE(c.inside(tau.chart[r], hi));
  }
}

TEST(Cover, TranslationByFullPeriodIsIdentityOnCharts) {
  const Cover c = Cover::torus(2, 3, 0.05);
  const CoverMap m = c.translation({3, 0});
  for (int r = 0; r < c.chart_count(); ++r) EXPECT_EQ(m.chart[r], r);
}

TEST(Cover, AlignArc) {
  int n = 0;
  EXPECT_TRUE(align_arc(0.9, 1.1, 0.0, 0.2, &n));
  EXPECT_EQ(n, -1);
  EXPECT_FALSE(align_arc(0.3, 0.4, 0.6, 0.7, &n));
}
