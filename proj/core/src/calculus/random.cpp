#include "gerbecalc/calculus/random.hpp"

#include <numbers>

namespace gerbecalc::calculus {

std::uint64_t Rng::derive_seed(std::string_view name, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return h ^ z;
}

ScalarExpr random_trig(Rng& rng, int dim, double amp) {
  const ScalarExpr two_pi(2.0 * std::numbers::pi);
  ScalarExpr f(rng.uniform(-amp, amp));
  for (int k = 0; k < dim; ++k) {
    const ScalarExpr x = ScalarExpr::var(k);
    for (int freq = 1; freq <= 2; ++freq) {
      const ScalarExpr arg = ScalarExpr(static_cast<double>(freq)) * two_pi * x;
      f = f + ScalarExpr(rng.uniform(-amp, amp)) * cos(arg);
      f = f + ScalarExpr(rng.uniform(-amp, amp)) * sin(arg);
    }
  }
  if (dim >= 2) {
    const ScalarExpr arg = two_pi * (ScalarExpr::var(0) + ScalarExpr::var(1));
    f = f + ScalarExpr(rng.uniform(-amp, amp)) * sin(arg);
  }
  return f;
}

}  // namespace gerbecalc::calculus
