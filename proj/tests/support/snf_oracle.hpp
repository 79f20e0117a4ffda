#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include <boost/integer/common_factor.hpp>

#include "gerbecalc/nerve/nerve.hpp"

namespace gerbecalc::oracle {

// gcd of all k x k minors, by brute force. The product of the first k
// invariant factors equals this determinantal divisor.
inline nerve::BigInt determinantal_divisor(const nerve::IntMatrix& m, int k) {
  nerve::BigInt g = 0;
  std::vector<bool> rsel(m.rows, false), csel(m.cols, false);
  std::fill(rsel.begin(), rsel.begin() + k, true);
  do {
    std::fill(csel.begin(), csel.end(), false);
    std::fill(csel.begin(), csel.begin() + k, true);
    do {
      nerve::BigMatrix sub(k, k);
      int a = 0;
      for (int i = 0; i < m.rows; ++i) {
        if (!rsel[i]) continue;
        int b = 0;
        for (int j = 0; j < m.cols; ++j)
          if (csel[j]) sub(a, b++) = m(i, j);
        ++a;
      }
      g = boost::integer::gcd(g, nerve::BigInt(abs(nerve::determinant(sub))));
    } while (std::prev_permutation(csel.begin(), csel.end()));
  } while (std::prev_permutation(rsel.begin(), rsel.end()));
  return g;
}

// Up to 5 x 5 with small entries; a third are low-rank products.
inline nerve::IntMatrix random_matrix(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> dim(1, 5), entry(-6, 6), coin(0, 2);
  const int r = dim(gen), c = dim(gen);
  nerve::IntMatrix m(r, c);
  if (coin(gen) == 0) {
    const int k = std::max(1, std::min(r, c) - 1);
    nerve::IntMatrix a(r, k), b(k, c);
    for (auto& x : a.a) x = entry(gen);
    for (auto& x : b.a) x = entry(gen);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        for (int l = 0; l < k; ++l) m(i, j) += a(i, l) * b(l, j);
  } else {
    for (auto& x : m.a) x = entry(gen);
  }
  return m;
}

// Empty string if the SNF of m reconstructs with unimodular transforms and
// matches the determinantal divisors; otherwise a description of the failure.
inline std::string snf_defect(const nerve::IntMatrix& m) {
  const nerve::SNF s = nerve::smith_normal_form(m);
  if (nerve::multiply(nerve::multiply(s.U, s.D), s.V).a != nerve::to_big(m).a) return "U D V != M";
  if (abs(nerve::determinant(s.U)) != 1 || abs(nerve::determinant(s.V)) != 1) return "transform not unimodular";
  nerve::BigInt prod = 1;
  for (int k = 0; k < s.rank(); ++k) {
    if (s.diagonal[k] <= 0) return "non-positive invariant factor";
    if (k > 0 && s.diagonal[k] % s.diagonal[k - 1] != 0) return "divisibility chain broken";
    if (s.D(k, k) != s.diagonal[k]) return "D disagrees with diagonal";
    prod *= s.diagonal[k];
    if (prod != determinantal_divisor(m, k + 1)) return "determinantal divisor mismatch";
  }
  if (s.rank() < std::min(m.rows, m.cols) && determinantal_divisor(m, s.rank() + 1) != 0) return "rank too small";
  if (nerve::invariant_factors(m) != s.diagonal) return "sparse and dense factors differ";
  return {};
}

}  // namespace gerbecalc::oracle
