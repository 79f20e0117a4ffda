#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "gerbecalc/calculus/expr.hpp"

namespace gerbecalc::calculus {

// Named splittable generator. A child seed is FNV-1a(name) xor splitmix64(seed).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  static std::uint64_t derive_seed(std::string_view name, std::uint64_t seed);
  Rng split(std::string_view name) const { return Rng(derive_seed(name, seed_)); }

  std::uint64_t seed() const { return seed_; }
  // Uniform in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  // Uniform integer in [lo, hi].
  int integer(int lo, int hi) { return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

// Real trigonometric polynomial of degree <= 2 in x1..x_dim, periodic with
// period 1: constant, cos/sin at frequencies 1 and 2 per axis, and one mixed
// term in (x1 + x2). Coefficients are uniform in [-amp, amp].
ScalarExpr random_trig(Rng& rng, int dim, double amp);

}  // namespace gerbecalc::calculus
