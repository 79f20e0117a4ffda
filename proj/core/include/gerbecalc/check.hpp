#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace gerbecalc {

// Running maximum of a residual over sample points. A non-finite sample makes
// the maximum +inf so that it can never pass a tolerance.
struct Residual {
  std::string name;
  double max = 0.0;
  long points = 0;

  void add(double r) {
    if (!std::isfinite(r)) r = std::numeric_limits<double>::infinity();
    max = std::max(max, r);
    ++points;
  }
  void merge(const Residual& o) {
    max = std::max(max, o.max);
    points += o.points;
  }
};

using ResidualReport = std::vector<Residual>;

inline const Residual* find_residual(const ResidualReport& r, const std::string& name) {
  for (const auto& x : r)
    if (x.name == name) return &x;
  return nullptr;
}

// Points drawn per simplex so that each simplex dimension gets at least
// `per_class` points in total.
struct SampleConfig {
  int per_class = 200;
  std::uint64_t seed = 1;
  int per_simplex(std::size_t simplices) const {
    if (simplices == 0) return 0;
    return std::max<int>(1, static_cast<int>((per_class + simplices - 1) / simplices));
  }
};

}  // namespace gerbecalc
