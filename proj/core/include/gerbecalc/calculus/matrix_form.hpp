#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gerbecalc/calculus/eval_point.hpp"
#include "gerbecalc/calculus/expr.hpp"
#include "gerbecalc/calculus/form.hpp"

namespace gerbecalc::calculus {

// n x n matrix of expressions, row-major.
class ExprMatrix {
 public:
  ExprMatrix() = default;
  explicit ExprMatrix(int n) : n_(n), e_(static_cast<std::size_t>(n) * n) {}
  static ExprMatrix identity(int n);
  static ExprMatrix scalar(const ScalarExpr& s) {
    ExprMatrix m(1);
    m(0, 0) = s;
    return m;
  }

  int size() const { return n_; }
  ScalarExpr& operator()(int r, int c) { return e_[r * n_ + c]; }
  const ScalarExpr& operator()(int r, int c) const { return e_[r * n_ + c]; }
  JetMatrix eval(const EvalPoint& p) const;
  friend ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b);
  friend ExprMatrix operator+(const ExprMatrix& a, const ExprMatrix& b);
  friend ExprMatrix operator*(const ScalarExpr& s, const ExprMatrix& a);

 private:
  int n_ = 0;
  std::vector<ScalarExpr> e_;
};

// Symbolic n x n matrix-valued form of mixed degree. Keys are strictly
// increasing variable ids (x1..x9 -> 0..8, t -> 9).
class MatrixForm {
 public:
  using Key = std::vector<int>;

  MatrixForm() = default;
  explicit MatrixForm(int n) : n_(n) {}
  static MatrixForm function(const ExprMatrix& m);
  static MatrixForm scalar(const ScalarExpr& f, Key key = {});

  int size() const { return n_; }
  const std::map<Key, ExprMatrix>& terms() const { return terms_; }
  // Adds coeff * dx_{vars[0]} ^ dx_{vars[1]} ^ ...; `vars` may be unsorted.
  void add_term(Key vars, const ExprMatrix& coeff);
  // Single degree if homogeneous, -1 if mixed, 0 for the empty form.
  int degree() const;
  bool depends_on(int var) const;

  // Evaluates at p. Factors dx_v with v not among p.axes restrict to zero.
  FormJet eval(const EvalPoint& p) const;
  // Scalar forms only: "(expr) dx1^dx2 + (expr) dt".
  std::string to_string() const;

  friend MatrixForm operator+(const MatrixForm& a, const MatrixForm& b);
  friend MatrixForm operator*(const ScalarExpr& s, const MatrixForm& a);
  friend MatrixForm wedge(const MatrixForm& a, const MatrixForm& b);

 private:
  int n_ = 1;
  std::map<Key, ExprMatrix> terms_;
};

// Parses a scalar form such as "(sin(2*pi*x1)) dx1^dx2 - (x3) dx3^dt".
MatrixForm parse_form(std::string_view text);

// Fiber integral over t in [0,1] of a symbolic form on X x I, evaluated at a
// point of X. Gauss-Legendre with `nodes` nodes; t must not be among p.axes.
FormJet fiber_integrate_I(const MatrixForm& a, const EvalPoint& p, int nodes);

}  // namespace gerbecalc::calculus
