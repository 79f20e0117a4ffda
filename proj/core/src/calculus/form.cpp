#include "gerbecalc/calculus/form.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "gerbecalc/error.hpp"

namespace gerbecalc::calculus {

JetMatrix::JetMatrix(int n, int nvars, int order)
    : n_(n), nvars_(nvars), order_(order), e_(static_cast<std::size_t>(n) * n, Jet(nvars, order)) {}

JetMatrix JetMatrix::identity(int n, int nvars, int order) {
  JetMatrix m(n, nvars, order);
  for (int i = 0; i < n; ++i) m(i, i) += 1.0;
  return m;
}

JetMatrix JetMatrix::scalar(const Jet& s, int n) {
  JetMatrix m(n, s.nvars(), s.order());
  for (int i = 0; i < n; ++i) m(i, i) = s;
  return m;
}

JetMatrix JetMatrix::adjoint() const {
  JetMatrix r(n_, nvars_, order_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r(i, j) = (*this)(j, i).conj();
  return r;
}

JetMatrix JetMatrix::truncated(int order) const {
  if (order >= order_) return *this;
  JetMatrix r = *this;
  for (Jet& j : r.e_) j = j.truncated(order);
  r.order_ = order;
  return r;
}

JetMatrix JetMatrix::derivative(int axis) const {
  if (order_ < 1) throw PreconditionError("jet: order exhausted by differentiation");
  JetMatrix r(n_, nvars_, order_ - 1);
  for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k].derivative(axis);
  return r;
}

JetMatrix JetMatrix::restricted(int keep) const {
  if (keep >= nvars_) return *this;
  JetMatrix r(n_, keep, order_);
  for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k].restricted(keep);
  return r;
}

Jet JetMatrix::trace() const {
  Jet t(nvars_, order_);
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double JetMatrix::max_abs(bool value_only) const {
  double m = 0;
  for (const Jet& j : e_) m = std::max(m, j.max_abs(value_only));
  return m;
}

JetMatrix& JetMatrix::operator+=(const JetMatrix& o) {
  if (o.n_ != n_ || o.nvars_ != nvars_) throw PreconditionError("matrix shape mismatch");
  if (o.order_ < order_) *this = truncated(o.order_);
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
  return *this;
}

JetMatrix& JetMatrix::operator-=(const JetMatrix& o) {
  if (o.n_ != n_ || o.nvars_ != nvars_) throw PreconditionError("matrix shape mismatch");
  if (o.order_ < order_) *this = truncated(o.order_);
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
  return *this;
}

JetMatrix& JetMatrix::operator*=(Complex s) {
  for (Jet& j : e_) j *= s;
  return *this;
}

JetMatrix& JetMatrix::operator*=(const Jet& s) {
  if (s.order() < order_) *this = truncated(s.order());
  for (Jet& j : e_) j = j * s;
  return *this;
}

JetMatrix JetMatrix::operator-() const {
  JetMatrix r = *this;
  for (Jet& j : r.e_) j = -j;
  return r;
}

JetMatrix operator*(const JetMatrix& a, const JetMatrix& b) {
  if (a.n_ != b.n_ || a.nvars_ != b.nvars_) throw PreconditionError("matrix shape mismatch");
  const int n = a.n_;
  JetMatrix r(n, a.nvars_, std::min(a.order_, b.order_));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) r(i, j) += a(i, k) * b(k, j);
  return r;
}

FormJet FormJet::zero0(int n, int nvars, int order) {
  FormJet f(n, nvars, order);
  f.terms_.emplace(0u, JetMatrix(n, nvars, order));
  return f;
}

FormJet FormJet::function(const JetMatrix& m, unsigned mask) {
  FormJet f(m.size(), m.nvars(), m.order());
  f.terms_.emplace(mask, m);
  return f;
}

FormJet FormJet::scalar(const Jet& s, unsigned mask) { return function(JetMatrix::scalar(s, 1), mask); }

FormJet FormJet::identity(int n, int nvars, int order) {
  return function(JetMatrix::identity(n, nvars, order));
}

Jet FormJet::coeff(unsigned mask) const {
  if (n_ != 1) throw PreconditionError("form: scalar coefficient of a matrix form");
  auto it = terms_.find(mask);
  if (it == terms_.end()) return Jet(nvars_, order_);
  return it->second(0, 0);
}

void FormJet::add_term(unsigned mask, const JetMatrix& m) {
  if (m.size() != n_ || m.nvars() != nvars_) throw PreconditionError("form: term shape mismatch");
  if (m.order() < order_) *this = truncated(m.order());
  auto it = terms_.find(mask);
  if (it == terms_.end()) {
    terms_.emplace(mask, m.truncated(order_));
  } else {
    it->second += m;
  }
}

FormJet FormJet::degree_part(int k) const {
  FormJet r(n_, nvars_, order_);
  for (const auto& [mask, m] : terms_)
    if (std::popcount(mask) == k) r.terms_.emplace(mask, m);
  return r;
}

int FormJet::max_degree() const {
  int d = -1;
  for (const auto& [mask, m] : terms_) d = std::max(d, std::popcount(mask));
  return d;
}

double FormJet::max_abs(bool value_only) const {
  double r = 0;
  for (const auto& [mask, m] : terms_) r = std::max(r, m.max_abs(value_only));
  return r;
}

FormJet FormJet::truncated(int order) const {
  if (order >= order_) return *this;
  FormJet r(n_, nvars_, order);
  for (const auto& [mask, m] : terms_) r.terms_.emplace(mask, m.truncated(order));
  return r;
}

FormJet FormJet::adjoint() const {
  FormJet r(n_, nvars_, order_);
  for (const auto& [mask, m] : terms_) r.terms_.emplace(mask, m.adjoint());
  return r;
}

FormJet FormJet::restricted(int keep) const {
  if (keep >= nvars_) return *this;
  FormJet r(n_, keep, order_);
  for (const auto& [mask, m] : terms_)
    if ((mask >> keep) == 0) r.terms_.emplace(mask, m.restricted(keep));
  return r;
}

FormJet FormJet::last_axis_part() const {
  if (nvars_ == 0) throw PreconditionError("form: no axis to integrate");
  const unsigned bit = 1u << (nvars_ - 1);
  FormJet r(n_, nvars_ - 1, order_);
  for (const auto& [mask, m] : terms_)
    if (mask & bit) r.terms_.emplace(mask & ~bit, m.restricted(nvars_ - 1));
  return r;
}

void FormJet::check_shape(const FormJet& o) const {
  if (o.n_ != n_ || o.nvars_ != nvars_) throw PreconditionError("form shape mismatch");
}

FormJet& FormJet::operator+=(const FormJet& o) {
  check_shape(o);
  if (o.order_ < order_) *this = truncated(o.order_);
  for (const auto& [mask, m] : o.terms_) {
    auto it = terms_.find(mask);
    if (it == terms_.end()) {
      terms_.emplace(mask, m.truncated(order_));
    } else {
      it->second += m;
    }
  }
  return *this;
}

FormJet& FormJet::operator-=(const FormJet& o) {
  check_shape(o);
  if (o.order_ < order_) *this = truncated(o.order_);
  for (const auto& [mask, m] : o.terms_) {
    auto it = terms_.find(mask);
    if (it == terms_.end()) {
      terms_.emplace(mask, -m.truncated(order_));
    } else {
      it->second -= m;
    }
  }
  return *this;
}

FormJet& FormJet::operator*=(Complex s) {
  for (auto& [mask, m] : terms_) m *= s;
  return *this;
}

FormJet FormJet::operator-() const {
  FormJet r = *this;
  for (auto& [mask, m] : r.terms_) m = -m;
  return r;
}

int wedge_sign(unsigned a, unsigned b) {
  int inversions = 0;
  for (unsigned bb = b; bb; bb &= bb - 1) {
    const int j = std::countr_zero(bb);
    inversions += std::popcount(a >> (j + 1));
  }
  return inversions % 2 ? -1 : 1;
}

FormJet wedge(const FormJet& a, const FormJet& b) {
  if (a.nvars() != b.nvars()) throw PreconditionError("wedge: ambient dimension mismatch");
  const bool scalar_a = a.size() == 1 && b.size() != 1;
  const bool scalar_b = b.size() == 1 && a.size() != 1;
  if (!scalar_a && !scalar_b && a.size() != b.size()) throw PreconditionError("wedge: matrix size mismatch");
  const int n = scalar_a ? b.size() : a.size();
  const int order = std::min(a.order(), b.order());
  FormJet r(n, a.nvars(), order);
  for (const auto& [ma, A] : a.terms()) {
    for (const auto& [mb, B] : b.terms()) {
      if (ma & mb) continue;
      JetMatrix prod;
      if (scalar_a) {
        prod = B.truncated(order);
        prod *= A(0, 0);
      } else if (scalar_b) {
        prod = A.truncated(order);
        prod *= B(0, 0);
      } else {
        prod = A * B;
      }
      if (wedge_sign(ma, mb) < 0) prod = -prod;
      r.add_term(ma | mb, prod);
    }
  }
  return r;
}

FormJet exterior_d(const FormJet& a) {
  if (a.order() < 1) throw PreconditionError("exterior_d: jet order exhausted");
  FormJet r(a.size(), a.nvars(), a.order() - 1);
  for (const auto& [mask, m] : a.terms()) {
    for (int j = 0; j < a.nvars(); ++j) {
      const unsigned bit = 1u << j;
      if (mask & bit) continue;
      JetMatrix dm = m.derivative(j);
      if (std::popcount(mask & (bit - 1)) % 2) dm = -dm;
      r.add_term(mask | bit, dm);
    }
  }
  return r;
}

FormJet trace_form(const FormJet& a) {
  FormJet r(1, a.nvars(), a.order());
  if (a.size() == 0) return r;
  for (const auto& [mask, m] : a.terms()) r.add_term(mask, JetMatrix::scalar(m.trace(), 1));
  return r;
}

FormJet exp_even_form(const FormJet& xi, int top_dim) {
  if (xi.size() != 1) throw PreconditionError("exp_even_form: scalar form required");
  for (const auto& [mask, m] : xi.terms())
    if (std::popcount(mask) % 2) throw PreconditionError("exp_even_form: odd-degree input");
  FormJet result = FormJet::identity(1, xi.nvars(), xi.order());
  FormJet power = result;
  FormJet positive = xi;
  // Degree-0 parts would break nilpotency; they are exponentiated separately.
  Jet c0 = positive.coeff(0);
  const bool has_c0 = positive.has(0);
  if (has_c0) positive.add_term(0, JetMatrix::scalar(-c0, 1));
  for (int r = 1; r <= xi.nvars(); ++r) {
    power = wedge(power, positive) * (1.0 / r);
    if (power.max_degree() < 0 || power.max_degree() > xi.nvars()) break;
    result += power;
  }
  if (has_c0) {
    std::vector<Complex> taylor(c0.order() + 1);
    const Complex e = std::exp(c0.value());
    double fact = 1;
    for (int k = 0; k <= c0.order(); ++k) {
      if (k > 0) fact *= k;
      taylor[k] = e / fact;
    }
    result = wedge(FormJet::scalar(c0.compose(taylor)), result);
  }
  if (top_dim >= 0) {
    FormJet cut(1, result.nvars(), result.order());
    for (int k = 0; k <= top_dim; ++k) cut += result.degree_part(k);
    result = cut;
  }
  return result;
}

FormJet wedge_power(const FormJet& a, int m) {
  FormJet r = FormJet::identity(a.size(), a.nvars(), a.order());
  for (int k = 0; k < m; ++k) r = wedge(r, a);
  return r;
}

JetMatrix inverse(const JetMatrix& m) {
  const int n = m.size();
  JetMatrix a = m;
  JetMatrix r = JetMatrix::identity(n, m.nvars(), m.order());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int k = c + 1; k < n; ++k)
      if (std::abs(a(k, c).value()) > std::abs(a(piv, c).value())) piv = k;
    if (std::abs(a(piv, c).value()) == 0.0) throw EvalError("inverse: singular matrix");
    if (piv != c)
      for (int k = 0; k < n; ++k) {
        std::swap(a(c, k), a(piv, k));
        std::swap(r(c, k), r(piv, k));
      }
    const Jet inv = a(c, c).reciprocal();
    for (int k = 0; k < n; ++k) {
      a(c, k) = a(c, k) * inv;
      r(c, k) = r(c, k) * inv;
    }
    for (int row = 0; row < n; ++row) {
      if (row == c) continue;
      const Jet f = a(row, c);
      for (int k = 0; k < n; ++k) {
        a(row, k) -= f * a(c, k);
        r(row, k) -= f * r(c, k);
      }
    }
  }
  return r;
}

JetMatrix block_diag(const JetMatrix& a, const JetMatrix& b) {
  const int n = a.size(), m = b.size();
  const int nvars = n ? a.nvars() : b.nvars();
  JetMatrix r(n + m, nvars, std::min(n ? a.order() : b.order(), m ? b.order() : a.order()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = a(i, j).truncated(r.order());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) r(n + i, n + j) = b(i, j).truncated(r.order());
  return r;
}

FormJet block_diag(const FormJet& a, const FormJet& b) {
  if (a.nvars() != b.nvars()) throw PreconditionError("block_diag: ambient dimension mismatch");
  const int n = a.size(), m = b.size();
  const int order = std::min(a.order(), b.order());
  FormJet r(n + m, a.nvars(), order);
  const JetMatrix za(n, a.nvars(), order), zb(m, a.nvars(), order);
  for (const auto& [mask, ma] : a.terms()) {
    auto it = b.terms().find(mask);
    r.add_term(mask, block_diag(ma, it == b.terms().end() ? zb : it->second));
  }
  for (const auto& [mask, mb] : b.terms())
    if (!a.has(mask)) r.add_term(mask, block_diag(za, mb));
  return r;
}

FormJet scale(const Jet& s, const FormJet& f) {
  FormJet r(f.size(), f.nvars(), std::min(f.order(), s.order()));
  for (const auto& [mask, m] : f.terms()) {
    JetMatrix x = m.truncated(r.order());
    x *= s;
    r.add_term(mask, x);
  }
  return r;
}

}  // namespace gerbecalc::calculus
