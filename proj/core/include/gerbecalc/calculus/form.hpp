#pragma once

#include <map>
#include <vector>

#include "gerbecalc/calculus/jet.hpp"

namespace gerbecalc::calculus {

// Dense n x n matrix of jets sharing one (nvars, order) shape.
class JetMatrix {
 public:
  JetMatrix() = default;
  JetMatrix(int n, int nvars, int order);
  static JetMatrix identity(int n, int nvars, int order);
  static JetMatrix scalar(const Jet& s, int n);

  int size() const { return n_; }
  int nvars() const { return nvars_; }
  int order() const { return order_; }
  Jet& operator()(int r, int c) { return e_[r * n_ + c]; }
  const Jet& operator()(int r, int c) const { return e_[r * n_ + c]; }

  JetMatrix adjoint() const;
  JetMatrix truncated(int order) const;
  JetMatrix derivative(int axis) const;
  JetMatrix restricted(int keep) const;
  Jet trace() const;
  double max_abs(bool value_only = true) const;

  JetMatrix& operator+=(const JetMatrix& o);
  JetMatrix& operator-=(const JetMatrix& o);
  JetMatrix& operator*=(Complex s);
  JetMatrix& operator*=(const Jet& s);
  friend JetMatrix operator+(JetMatrix a, const JetMatrix& b) { return a += b; }
  friend JetMatrix operator-(JetMatrix a, const JetMatrix& b) { return a -= b; }
  friend JetMatrix operator*(const JetMatrix& a, const JetMatrix& b);
  friend JetMatrix operator*(JetMatrix a, Complex s) { return a *= s; }
  JetMatrix operator-() const;

 private:
  int n_ = 0, nvars_ = 0, order_ = 0;
  std::vector<Jet> e_;
};

// Pointwise value of an n x n matrix-valued differential form of mixed degree,
// with jet coefficients. Term keys are bitmasks over the evaluation axes:
// bit k set means dx_{axes[k]} is a factor, factors in increasing axis order.
class FormJet {
 public:
  FormJet() = default;
  FormJet(int n, int nvars, int order) : n_(n), nvars_(nvars), order_(order) {}
  static FormJet zero0(int n, int nvars, int order);
  static FormJet function(const JetMatrix& m, unsigned mask = 0);
  static FormJet scalar(const Jet& f, unsigned mask = 0);
  static FormJet identity(int n, int nvars, int order);

  int size() const { return n_; }
  int nvars() const { return nvars_; }
  int order() const { return order_; }
  const std::map<unsigned, JetMatrix>& terms() const { return terms_; }
  bool has(unsigned mask) const { return terms_.count(mask) != 0; }
  const JetMatrix& at(unsigned mask) const { return terms_.at(mask); }
  // Scalar (n == 1) coefficient at `mask`; zero jet if absent.
  Jet coeff(unsigned mask) const;
  Jet function_value() const { return coeff(0); }

  void add_term(unsigned mask, const JetMatrix& m);
  FormJet degree_part(int k) const;
  // Highest degree present; -1 for the zero form.
  int max_degree() const;
  double max_abs(bool value_only = true) const;

  FormJet truncated(int order) const;
  FormJet adjoint() const;
  FormJet restricted(int keep) const;
  // Terms containing the last axis, with that factor removed (dx_I ^ dt -> dx_I)
  // and coefficients restricted to the remaining axes.
  FormJet last_axis_part() const;

  FormJet& operator+=(const FormJet& o);
  FormJet& operator-=(const FormJet& o);
  FormJet& operator*=(Complex s);
  friend FormJet operator+(FormJet a, const FormJet& b) { return a += b; }
  friend FormJet operator-(FormJet a, const FormJet& b) { return a -= b; }
  friend FormJet operator*(FormJet a, Complex s) { return a *= s; }
  friend FormJet operator*(Complex s, FormJet a) { return a *= s; }
  FormJet operator-() const;

 private:
  void check_shape(const FormJet& o) const;

  int n_ = 0, nvars_ = 0, order_ = 0;
  std::map<unsigned, JetMatrix> terms_;
};

// Sign of dx_a ^ dx_b relative to dx_{a|b} for disjoint masks.
int wedge_sign(unsigned a, unsigned b);

// Matrix wedge; a size-1 factor acts as a scalar on the other factor.
FormJet wedge(const FormJet& a, const FormJet& b);
// Exterior derivative; the result has one order less.
FormJet exterior_d(const FormJet& a);
FormJet trace_form(const FormJet& a);
// Sum over r of xi^r / r! for an even scalar form (terminates by nilpotency);
// degrees above `top_dim` are dropped when top_dim >= 0.
FormJet exp_even_form(const FormJet& xi, int top_dim = -1);
// Integer power under wedge.
FormJet wedge_power(const FormJet& a, int m);

// Matrix inverse by Gauss-Jordan elimination on jets (pivoting on values).
JetMatrix inverse(const JetMatrix& m);
JetMatrix block_diag(const JetMatrix& a, const JetMatrix& b);
FormJet block_diag(const FormJet& a, const FormJet& b);
// Scalar jet times a form of any size.
FormJet scale(const Jet& s, const FormJet& f);

}  // namespace gerbecalc::calculus
