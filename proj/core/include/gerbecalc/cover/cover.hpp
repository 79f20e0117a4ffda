#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gerbecalc/calculus/eval_point.hpp"

namespace gerbecalc::cover {

// Sorted chart indices with nonempty common intersection.
using Simplex = std::vector<int>;

inline constexpr int kMaxSimplexDim = 4;

struct Box {
  std::vector<double> lo, hi;
};

// A point of a simplex's intersection, in the coordinates of every member
// chart: coords[k] is in chart simplex[k].
struct SamplePoint {
  std::vector<std::vector<double>> coords;
};

// Map from the charts of one grid cover into another: chart r goes to
// chart[r], and x_target = x_r + offset[r]. Refinement maps have zero offsets;
// translation maps carry the translation vector (up to a lattice vector).
struct CoverMap {
  std::vector<int> chart;
  std::vector<std::vector<double>> offset;
};

// Grid cover of the flat torus R^d / Z^d by N^d open boxes
// [a/N - m, (a+1)/N + m] per axis. Chart index = sum a_k N^k.
class Cover {
 public:
  static Cover torus(int dim, int grid, double margin);

  int dim() const { return dim_; }
  int grid() const { return grid_; }
  double margin() const { return margin_; }
  int chart_count() const { return static_cast<int>(boxes_.size()); }
  const Box& box(int chart) const { return boxes_[chart]; }
  std::vector<int> grid_index(int chart) const;
  int chart_at(const std::vector<int>& grid_index) const;

  // Nerve simplices of dimension k (k+1 charts), 0 <= k <= 4.
  const std::vector<Simplex>& simplices(int k) const { return simplices_[k]; }
  int simplex_index(const Simplex& s) const;
  bool contains(const Simplex& s) const { return simplex_index(s) >= 0; }

  // Lattice vector x_i - x_j for a point of U_i n U_j.
  std::vector<int> shift(int i, int j) const;
  // Common intersection box in the coordinates of s[0]; empty optional-like
  // result (lo >= hi on some axis) if the charts do not meet.
  Box intersection(const Simplex& s) const;

  // Re-expresses p in the coordinates of `chart` (which must meet p.chart).
  calculus::EvalPoint to_chart(const calculus::EvalPoint& p, int chart) const;
  bool inside(int chart, const std::vector<double>& x) const;

  std::vector<SamplePoint> sample_points(const Simplex& s, int count, std::uint64_t seed) const;

  // Grid cover with N*factor charts and margin / factor, plus the chart map.
  Cover refine(int factor, CoverMap* tau) const;
  // Chart map of the translation x -> x + steps/N onto this cover.
  CoverMap translation(const std::vector<int>& steps) const;

 private:
  int dim_ = 0, grid_ = 0;
  double margin_ = 0.0;
  std::vector<Box> boxes_;
  std::vector<Simplex> simplices_[kMaxSimplexDim + 1];
  std::map<Simplex, int> index_;
};

// Point of chart r re-expressed in chart m.chart[r] of the target cover.
calculus::EvalPoint apply_map(const CoverMap& m, const calculus::EvalPoint& p);

// Integer n with (a + n) overlapping b, for arcs shorter than 1/2; returns
// false if the arcs do not meet.
bool align_arc(double alo, double ahi, double blo, double bhi, int* n);

}  // namespace gerbecalc::cover
