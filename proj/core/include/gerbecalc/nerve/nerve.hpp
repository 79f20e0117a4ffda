#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gerbecalc/cover/cover.hpp"

namespace gerbecalc::deligne {
class GerbeConn;
}

namespace gerbecalc::nerve {

using BigInt = boost::multiprecision::cpp_int;
using Simplex = std::vector<int>;

// Finite simplicial complex, closed under faces. Simplices are sorted tuples.
class AbstractComplex {
 public:
  AbstractComplex() = default;
  // Closure under faces of the given simplices (any vertex order).
  static AbstractComplex from_simplices(const std::vector<Simplex>& top);
  static AbstractComplex from_cover(const cover::Cover& c);
  static AbstractComplex circle();
  static AbstractComplex rp2();
  // One simplex per line, whitespace separated vertex indices; '#' comments.
  static AbstractComplex parse(const std::string& text);
  static AbstractComplex load(const std::string& path);

  int vertex_count() const { return vertices_; }
  int top_dim() const { return static_cast<int>(simplices_.size()) - 1; }
  const std::vector<Simplex>& simplices(int q) const;
  int index(const Simplex& s) const;

 private:
  int vertices_ = 0;
  std::vector<std::vector<Simplex>> simplices_;
  std::map<Simplex, int> index_;
};

// Dense integer matrix, row major.
template <class T>
struct Matrix {
  int rows = 0, cols = 0;
  std::vector<T> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}
  T& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const T& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
};

using IntMatrix = Matrix<std::int64_t>;
using BigMatrix = Matrix<BigInt>;

BigMatrix to_big(const IntMatrix& m);
BigMatrix multiply(const BigMatrix& a, const BigMatrix& b);
BigInt determinant(const BigMatrix& m);

// (delta c)(v0..v_{q+1}) = sum_k (-1)^k c(v0..^vk..v_{q+1}); rows are
// (q+1)-simplices, columns q-simplices.
IntMatrix coboundary_matrix(const AbstractComplex& k, int q);

struct SNF {
  BigMatrix U, D, V;  // M = U D V
  std::vector<BigInt> diagonal;  // nonzero invariant factors, d1 | d2 | ...
  int rank() const { return static_cast<int>(diagonal.size()); }
};

SNF smith_normal_form(const BigMatrix& m);
SNF smith_normal_form(const IntMatrix& m);

// Rank and nonzero invariant factors (unit pivots are eliminated sparsely
// before a dense SNF of the remainder).
std::vector<BigInt> invariant_factors(const IntMatrix& m);

struct Cohomology {
  int betti = 0;
  std::vector<BigInt> torsion;  // invariant factors > 1
};

Cohomology cohomology(const AbstractComplex& k, int q);

struct IntCochain {
  int q = 0;
  std::vector<std::int64_t> values;  // indexed like AbstractComplex::simplices(q)
};

IntCochain coboundary(const AbstractComplex& k, const IntCochain& c);

// Smallest n >= 1 with n z in the image of delta; nullopt means infinity.
std::optional<BigInt> torsion_order(const AbstractComplex& k, const IntCochain& z);
// Some integer y with delta y = z, if one exists.
std::optional<IntCochain> solve_coboundary(const AbstractComplex& k, const IntCochain& z);

struct DDResult {
  IntCochain cocycle;
  double max_fraction = 0.0;  // distance from the nearest integer before rounding
  double max_spread = 0.0;    // variation across extra sample points
  long points = 0;
};

// Integer 3-cocycle (1/2 pi i) delta log lambda with one log branch per
// 2-simplex, chosen at the intersection centroid and continued along straight
// segments. Throws GluingError if the result is not integral within `tol`.
DDResult dd_cocycle(const deligne::GerbeConn& g, double tol = 1e-6, int extra_points = 5,
                    std::uint64_t seed = 1);

}  // namespace gerbecalc::nerve
