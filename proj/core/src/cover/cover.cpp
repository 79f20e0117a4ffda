#include "gerbecalc/cover/cover.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gerbecalc/calculus/random.hpp"
#include "gerbecalc/error.hpp"

namespace gerbecalc::cover {

bool align_arc(double alo, double ahi, double blo, double bhi, int* n) {
  // a + n meets b iff blo - ahi < n < bhi - alo.
  const int cand = static_cast<int>(std::floor(bhi - alo));
  for (int k = cand; k >= cand - 1; --k) {
    if (alo + k < bhi && ahi + k > blo) {
      *n = k;
      return true;
    }
  }
  return false;
}

Cover Cover::torus(int dim, int grid, double margin) {
  if (dim < 1 || dim > 3) throw PreconditionError("torus dimension must be 1..3");
  if (grid < 3) throw PreconditionError("grid must be at least 3");
  const double bound = (0.5 - 1.0 / grid) / 2.0;
  if (!(margin > 0.0 && margin < bound))
    throw PreconditionError("margin " + std::to_string(margin) + " outside (0, " + std::to_string(bound) + ")");
  Cover c;
  c.dim_ = dim;
  c.grid_ = grid;
  c.margin_ = margin;
  int count = 1;
  for (int k = 0; k < dim; ++k) count *= grid;
  for (int i = 0; i < count; ++i) {
    Box b;
    for (int a : c.grid_index(i)) {
      b.lo.push_back(static_cast<double>(a) / grid - margin);
      b.hi.push_back(static_cast<double>(a + 1) / grid + margin);
    }
    c.boxes_.push_back(std::move(b));
  }
  for (int i = 0; i < count; ++i) c.simplices_[0].push_back({i});
  for (int k = 1; k <= kMaxSimplexDim; ++k) {
    for (const Simplex& s : c.simplices_[k - 1]) {
      for (int v = s.back() + 1; v < count; ++v) {
        Simplex t = s;
        t.push_back(v);
        const Box b = c.intersection(t);
        bool ok = !b.lo.empty();
        for (int a = 0; ok && a < dim; ++a) ok = b.lo[a] < b.hi[a];
        if (ok) c.simplices_[k].push_back(std::move(t));
      }
    }
  }
  for (int k = 0; k <= kMaxSimplexDim; ++k)
    for (std::size_t n = 0; n < c.simplices_[k].size(); ++n) c.index_[c.simplices_[k][n]] = static_cast<int>(n);
  return c;
}

std::vector<int> Cover::grid_index(int chart) const {
  std::vector<int> a(dim_);
  for (int k = 0; k < dim_; ++k) {
    a[k] = chart % grid_;
    chart /= grid_;
  }
  return a;
}

int Cover::chart_at(const std::vector<int>& a) const {
  int idx = 0;
  for (int k = dim_ - 1; k >= 0; --k) idx = idx * grid_ + (((a[k] % grid_) + grid_) % grid_);
  return idx;
}

int Cover::simplex_index(const Simplex& s) const {
  auto it = index_.find(s);
  return it == index_.end() ? -1 : it->second;
}

std::vector<int> Cover::shift(int i, int j) const {
  std::vector<int> n(dim_);
  for (int a = 0; a < dim_; ++a) {
    // x_i = x_j + n  <=>  U_j + n meets U_i in lifted coordinates.
    if (!align_arc(boxes_[j].lo[a], boxes_[j].hi[a], boxes_[i].lo[a], boxes_[i].hi[a], &n[a]))
      throw PreconditionError("charts " + std::to_string(i) + " and " + std::to_string(j) + " do not meet");
  }
  return n;
}

Box Cover::intersection(const Simplex& s) const {
  if (s.empty()) throw PreconditionError("empty simplex");
  Box b = boxes_[s[0]];
  for (std::size_t k = 1; k < s.size(); ++k) {
    for (int a = 0; a < dim_; ++a) {
      int n = 0;
      const Box& o = boxes_[s[k]];
      if (!align_arc(o.lo[a], o.hi[a], b.lo[a], b.hi[a], &n)) return Box{};
      b.lo[a] = std::max(b.lo[a], o.lo[a] + n);
      b.hi[a] = std::min(b.hi[a], o.hi[a] + n);
    }
  }
  return b;
}

calculus::EvalPoint Cover::to_chart(const calculus::EvalPoint& p, int chart) const {
  if (chart == p.chart) return p;
  const std::vector<int> n = shift(chart, p.chart);
  calculus::EvalPoint q = p;
  q.chart = chart;
  for (int a = 0; a < dim_; ++a) q.values[a] += n[a];
  return q;
}

bool Cover::inside(int chart, const std::vector<double>& x) const {
  for (int a = 0; a < dim_; ++a)
    if (!(x[a] > boxes_[chart].lo[a] && x[a] < boxes_[chart].hi[a])) return false;
  return true;
}

std::vector<SamplePoint> Cover::sample_points(const Simplex& s, int count, std::uint64_t seed) const {
  if (s.empty()) throw PreconditionError("empty simplex");
  if (!contains(s)) throw PreconditionError("simplex not in nerve");
  std::string tag = "sample";
  for (int v : s) tag += ":" + std::to_string(v);
  calculus::Rng rng(calculus::Rng::derive_seed(tag, seed));
  const Box b = intersection(s);
  std::vector<std::vector<int>> shifts;
  for (int v : s) shifts.push_back(shift(v, s[0]));
  std::vector<SamplePoint> out;
  for (int n = 0; n < count; ++n) {
    std::vector<double> x(dim_);
    for (int a = 0; a < dim_; ++a) {
      const double w = b.hi[a] - b.lo[a];
      x[a] = rng.uniform(b.lo[a] + 0.01 * w, b.hi[a] - 0.01 * w);
    }
    SamplePoint sp;
    for (std::size_t k = 0; k < s.size(); ++k) {
      std::vector<double> y = x;
      for (int a = 0; a < dim_; ++a) y[a] += shifts[k][a];
      sp.coords.push_back(std::move(y));
    }
    out.push_back(std::move(sp));
  }
  return out;
}

Cover Cover::refine(int factor, CoverMap* tau) const {
  if (factor < 2) throw PreconditionError("refinement factor must be at least 2");
  Cover fine = torus(dim_, grid_ * factor, margin_ / factor);
  if (tau) {
    tau->chart.assign(fine.chart_count(), 0);
    tau->offset.assign(fine.chart_count(), std::vector<double>(dim_, 0.0));
    for (int r = 0; r < fine.chart_count(); ++r) {
      std::vector<int> a = fine.grid_index(r);
      for (int& v : a) v /= factor;
      tau->chart[r] = chart_at(a);
    }
  }
  return fine;
}

CoverMap Cover::translation(const std::vector<int>& steps) const {
  if (static_cast<int>(steps.size()) != dim_) throw PreconditionError("translation has wrong dimension");
  CoverMap m;
  for (int r = 0; r < chart_count(); ++r) {
    std::vector<int> a = grid_index(r);
    std::vector<double> off(dim_);
    std::vector<int> target(dim_);
    for (int k = 0; k < dim_; ++k) {
      const int moved = a[k] + steps[k];
      const int wrapped = ((moved % grid_) + grid_) % grid_;
      target[k] = wrapped;
      off[k] = static_cast<double>(steps[k]) / grid_ - static_cast<double>(moved - wrapped) / grid_;
    }
    m.chart.push_back(chart_at(target));
    m.offset.push_back(std::move(off));
  }
  return m;
}

calculus::EvalPoint apply_map(const CoverMap& m, const calculus::EvalPoint& p) {
  calculus::EvalPoint q = p;
  q.chart = m.chart[p.chart];
  for (std::size_t a = 0; a < m.offset[p.chart].size(); ++a) q.values[a] += m.offset[p.chart][a];
  return q;
}

}  // namespace gerbecalc::cover
