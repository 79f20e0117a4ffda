#include <algorithm>
#include <map>
#include <set>
#include <limits>
#include <stdexcept>
#include <utility>

#include "gerbecalc/error.hpp"
#include "gerbecalc/nerve/nerve.hpp"

namespace gerbecalc::nerve {

BigMatrix to_big(const IntMatrix& m) {
  BigMatrix b(m.rows, m.cols);
  for (std::size_t i = 0; i < m.a.size(); ++i) b.a[i] = m.a[i];
  return b;
}

BigMatrix multiply(const BigMatrix& a, const BigMatrix& b) {
  if (a.cols != b.rows) throw PreconditionError("matrix shape mismatch");
  BigMatrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      if (a(i, k) == 0) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

BigInt determinant(const BigMatrix& m) {
  if (m.rows != m.cols) throw PreconditionError("determinant of non-square matrix");
  // Bareiss fraction-free elimination.
  BigMatrix a = m;
  const int n = m.rows;
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    int p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

namespace {

// P A Q = D with optional bookkeeping of P, P^-1, Q, Q^-1.
struct DenseSNF {
  BigMatrix a, p, pinv, q, qinv;
  bool track_left = false, track_right = false;
  int rank = 0;

  DenseSNF(BigMatrix m, bool left, bool right) : a(std::move(m)), track_left(left), track_right(right) {
    if (left) p = pinv = BigMatrix::identity(a.rows);
    if (right) q = qinv = BigMatrix::identity(a.cols);
  }

  void swap_rows(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < a.cols; ++c) std::swap(a(i, c), a(j, c));
    if (track_left) {
      for (int c = 0; c < p.cols; ++c) std::swap(p(i, c), p(j, c));
      for (int r = 0; r < pinv.rows; ++r) std::swap(pinv(r, i), pinv(r, j));
    }
  }
  void swap_cols(int i, int j) {
    if (i == j) return;
    for (int r = 0; r < a.rows; ++r) std::swap(a(r, i), a(r, j));
    if (track_right) {
      for (int r = 0; r < q.rows; ++r) std::swap(q(r, i), q(r, j));
      for (int c = 0; c < qinv.cols; ++c) std::swap(qinv(i, c), qinv(j, c));
    }
  }
  // row_i += f row_j
  void add_row(int i, int j, const BigInt& f) {
    for (int c = 0; c < a.cols; ++c)
      if (a(j, c) != 0) a(i, c) += f * a(j, c);
    if (track_left) {
      for (int c = 0; c < p.cols; ++c)
        if (p(j, c) != 0) p(i, c) += f * p(j, c);
      for (int r = 0; r < pinv.rows; ++r)
        if (pinv(r, i) != 0) pinv(r, j) -= f * pinv(r, i);
    }
  }
  // col_i += f col_j
  void add_col(int i, int j, const BigInt& f) {
    for (int r = 0; r < a.rows; ++r)
      if (a(r, j) != 0) a(r, i) += f * a(r, j);
    if (track_right) {
      for (int r = 0; r < q.rows; ++r)
        if (q(r, j) != 0) q(r, i) += f * q(r, j);
      for (int c = 0; c < qinv.cols; ++c)
        if (qinv(i, c) != 0) qinv(j, c) -= f * qinv(i, c);
    }
  }
  void negate_row(int i) {
    for (int c = 0; c < a.cols; ++c) a(i, c) = -a(i, c);
    if (track_left) {
      for (int c = 0; c < p.cols; ++c) p(i, c) = -p(i, c);
      for (int r = 0; r < pinv.rows; ++r) pinv(r, i) = -pinv(r, i);
    }
  }

  bool min_entry(int t, int* bi, int* bj) const {
    bool found = false;
    BigInt best;
    for (int i = t; i < a.rows; ++i)
      for (int j = t; j < a.cols; ++j) {
        if (a(i, j) == 0) continue;
        const BigInt v = abs(a(i, j));
        if (!found || v < best) {
          found = true;
          best = v;
          *bi = i;
          *bj = j;
          if (best == 1) return true;
        }
      }
    return found;
  }

  void run() {
    const int n = std::min(a.rows, a.cols);
    for (int t = 0; t < n; ++t) {
      int bi = 0, bj = 0;
      if (!min_entry(t, &bi, &bj)) break;
      swap_rows(t, bi);
      swap_cols(t, bj);
      for (;;) {
        bool dirty = false;
        for (int i = t + 1; i < a.rows; ++i) {
          if (a(i, t) == 0) continue;
          add_row(i, t, -(a(i, t) / a(t, t)));
          if (a(i, t) != 0) dirty = true;
        }
        for (int j = t + 1; j < a.cols; ++j) {
          if (a(t, j) == 0) continue;
          add_col(j, t, -(a(t, j) / a(t, t)));
          if (a(t, j) != 0) dirty = true;
        }
        if (!dirty) {
          // Divisibility: fold an offending row into row t and retry.
          int bad = -1;
          for (int i = t + 1; i < a.rows && bad < 0; ++i)
            for (int j = t + 1; j < a.cols; ++j)
              if (a(i, j) % a(t, t) != 0) {
                bad = i;
                break;
              }
          if (bad < 0) break;
          add_row(t, bad, 1);
        }
        // Bring the smallest nonzero entry of row/column t to the pivot.
        int pi = t, pj = t;
        for (int i = t; i < a.rows; ++i)
          if (a(i, t) != 0 && (a(pi, pj) == 0 || abs(a(i, t)) < abs(a(pi, pj)))) {
            pi = i;
            pj = t;
          }
        for (int j = t; j < a.cols; ++j)
          if (a(t, j) != 0 && abs(a(t, j)) < abs(a(pi, pj))) {
            pi = t;
            pj = j;
          }
        swap_rows(t, pi);
        swap_cols(t, pj);
      }
      if (a(t, t) < 0) negate_row(t);
      rank = t + 1;
    }
  }
};

std::int64_t checked_mul_sub(std::int64_t x, std::int64_t f, std::int64_t y) {
  std::int64_t m = 0, r = 0;
  if (__builtin_mul_overflow(f, y, &m) || __builtin_sub_overflow(x, m, &r))
    throw std::overflow_error("sparse elimination overflow");
  return r;
}

// Row-only elimination of unit pivots: a pivot (r, c) with a_rc = +-1 clears
// column c from every other row; row r and column c then split off as a unit
// invariant factor. The right-hand sides receive the same row operations.
struct SparseEliminator {
  struct Pivot {
    int row, col;
    std::int64_t value;
    std::map<int, std::int64_t> entries;
  };

  int rows, cols;
  std::vector<std::map<int, std::int64_t>> row;
  std::vector<std::set<int>> col;
  std::vector<bool> row_alive, col_alive;
  std::vector<std::vector<std::int64_t>> rhs;  // rhs[k][row]
  std::vector<Pivot> pivots;

  explicit SparseEliminator(const IntMatrix& m)
      : rows(m.rows), cols(m.cols), row(m.rows), col(m.cols), row_alive(m.rows, true), col_alive(m.cols, true) {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (m(i, j) != 0) {
          row[i][j] = m(i, j);
          col[j].insert(i);
        }
  }

  void run() {
    for (;;) {
      int best_r = -1, best_c = -1;
      long best_cost = -1;
      for (int i = 0; i < rows; ++i) {
        if (!row_alive[i]) continue;
        const long rl = static_cast<long>(row[i].size()) - 1;
        for (const auto& [j, v] : row[i]) {
          if (v != 1 && v != -1) continue;
          const long cost = rl * (static_cast<long>(col[j].size()) - 1);
          if (best_cost < 0 || cost < best_cost) {
            best_cost = cost;
            best_r = i;
            best_c = j;
          }
        }
        if (best_cost == 0) break;
      }
      if (best_r < 0) return;
      eliminate(best_r, best_c);
    }
  }

  void eliminate(int r, int c) {
    const std::int64_t pv = row[r].at(c);
    const std::vector<int> targets(col[c].begin(), col[c].end());
    for (int i : targets) {
      if (i == r) continue;
      const std::int64_t f = row[i].at(c) * pv;  // pv is its own inverse
      for (const auto& [j, v] : row[r]) {
        const std::int64_t nv = checked_mul_sub(row[i].count(j) ? row[i][j] : 0, f, v);
        if (nv == 0) {
          row[i].erase(j);
          col[j].erase(i);
        } else {
          row[i][j] = nv;
          col[j].insert(i);
        }
      }
      for (auto& b : rhs) b[i] = checked_mul_sub(b[i], f, b[r]);
    }
    pivots.push_back(Pivot{r, c, pv, row[r]});
    for (const auto& [j, v] : row[r]) col[j].erase(r);
    row_alive[r] = false;
    col_alive[c] = false;
  }

  std::vector<int> alive_rows() const {
    std::vector<int> out;
    for (int i = 0; i < rows; ++i)
      if (row_alive[i]) out.push_back(i);
    return out;
  }
  std::vector<int> alive_cols() const {
    std::vector<int> out;
    for (int j = 0; j < cols; ++j)
      if (col_alive[j]) out.push_back(j);
    return out;
  }
  BigMatrix remainder(const std::vector<int>& rs, const std::vector<int>& cs) const {
    BigMatrix m(static_cast<int>(rs.size()), static_cast<int>(cs.size()));
    std::vector<int> where(cols, -1);
    for (std::size_t j = 0; j < cs.size(); ++j) where[cs[j]] = static_cast<int>(j);
    for (std::size_t i = 0; i < rs.size(); ++i)
      for (const auto& [j, v] : row[rs[i]])
        if (where[j] >= 0) m(static_cast<int>(i), where[j]) = v;
    return m;
  }
};

}  // namespace

SNF smith_normal_form(const BigMatrix& m) {
  DenseSNF s(m, true, true);
  s.run();
  SNF out;
  out.U = std::move(s.pinv);
  out.V = std::move(s.qinv);
  out.D = std::move(s.a);
  for (int t = 0; t < s.rank; ++t) out.diagonal.push_back(out.D(t, t));
  return out;
}

SNF smith_normal_form(const IntMatrix& m) { return smith_normal_form(to_big(m)); }

std::vector<BigInt> invariant_factors(const IntMatrix& m) {
  SparseEliminator e(m);
  e.run();
  std::vector<BigInt> out(e.pivots.size(), BigInt(1));
  DenseSNF s(e.remainder(e.alive_rows(), e.alive_cols()), false, false);
  s.run();
  for (int t = 0; t < s.rank; ++t) out.push_back(s.a(t, t));
  return out;
}

Cohomology cohomology(const AbstractComplex& k, int q) {
  if (q < 0) throw PreconditionError("negative cohomology degree");
  const int n = static_cast<int>(k.simplices(q).size());
  const std::vector<BigInt> out = invariant_factors(coboundary_matrix(k, q));
  std::vector<BigInt> in;
  if (q > 0) in = invariant_factors(coboundary_matrix(k, q - 1));
  Cohomology h;
  h.betti = n - static_cast<int>(out.size()) - static_cast<int>(in.size());
  for (const auto& d : in)
    if (d > 1) h.torsion.push_back(d);
  return h;
}

namespace {

struct SolveState {
  bool consistent = false;
  BigInt order;  // smallest n making n z solvable (valid if finite)
  bool finite = false;
  std::vector<BigInt> x;
};

SolveState solve(const AbstractComplex& k, const IntCochain& z, bool want_x) {
  if (z.q < 1) throw PreconditionError("cochain degree must be positive");
  if (z.values.size() != k.simplices(z.q).size()) throw PreconditionError("cochain size mismatch");
  const IntMatrix m = coboundary_matrix(k, z.q - 1);
  SparseEliminator e(m);
  e.rhs.push_back(z.values);
  e.run();
  const std::vector<int> rs = e.alive_rows(), cs = e.alive_cols();
  DenseSNF s(e.remainder(rs, cs), true, want_x);
  s.run();
  // w = P b on the remainder.
  std::vector<BigInt> w(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = 0; j < rs.size(); ++j)
      if (s.p(static_cast<int>(i), static_cast<int>(j)) != 0)
        w[i] += s.p(static_cast<int>(i), static_cast<int>(j)) * e.rhs[0][rs[j]];
  SolveState st;
  st.finite = true;
  st.order = 1;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (static_cast<int>(i) >= s.rank) {
      if (w[i] != 0) st.finite = false;
      continue;
    }
    const BigInt d = s.a(static_cast<int>(i), static_cast<int>(i));
    const BigInt need = d / gcd(d, w[i]);
    st.order = st.order / gcd(st.order, need) * need;
  }
  st.consistent = st.finite && st.order == 1;
  if (!st.consistent || !want_x) return st;

  std::vector<BigInt> y(cs.size());
  for (int t = 0; t < s.rank; ++t) y[t] = w[t] / s.a(t, t);
  std::vector<BigInt> x(m.cols);
  for (std::size_t j = 0; j < cs.size(); ++j) {
    BigInt v = 0;
    for (std::size_t t = 0; t < cs.size(); ++t) v += s.q(static_cast<int>(j), static_cast<int>(t)) * y[t];
    x[cs[j]] = v;
  }
  for (auto it = e.pivots.rbegin(); it != e.pivots.rend(); ++it) {
    BigInt v = e.rhs[0][it->row];
    for (const auto& [j, a] : it->entries)
      if (j != it->col) v -= a * x[j];
    x[it->col] = v * it->value;
  }
  st.x = std::move(x);
  return st;
}

}  // namespace

std::optional<BigInt> torsion_order(const AbstractComplex& k, const IntCochain& z) {
  const IntCochain dz = coboundary(k, z);
  for (auto v : dz.values)
    if (v != 0) throw PreconditionError("torsion_order: cochain is not a cocycle");
  const SolveState st = solve(k, z, false);
  if (!st.finite) return std::nullopt;
  return st.order;
}

std::optional<IntCochain> solve_coboundary(const AbstractComplex& k, const IntCochain& z) {
  const SolveState st = solve(k, z, true);
  if (!st.consistent) return std::nullopt;
  IntCochain y{z.q - 1, {}};
  for (const auto& v : st.x) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
      throw std::overflow_error("solve_coboundary: preimage exceeds 64 bits");
    y.values.push_back(static_cast<std::int64_t>(v));
  }
  if (coboundary(k, y).values != z.values) throw std::logic_error("solve_coboundary: back substitution failed");
  return y;
}

}  // namespace gerbecalc::nerve
