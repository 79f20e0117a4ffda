#include "gerbecalc/calculus/jet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "gerbecalc/error.hpp"

namespace gerbecalc::calculus {

namespace {

int degree_of(const MonomialTable::Exponents& e, int nvars) {
  int d = 0;
  for (int k = 0; k < nvars; ++k) d += e[k];
  return d;
}

// Enumerates exponent vectors of exact total degree `deg` in lexicographically
// decreasing order of the leading variables.
void enumerate(int nvars, int deg, int var, MonomialTable::Exponents& cur,
               std::vector<MonomialTable::Exponents>& out) {
  if (var == nvars - 1) {
    cur[var] = static_cast<std::uint8_t>(deg);
    out.push_back(cur);
    cur[var] = 0;
    return;
  }
  for (int k = deg; k >= 0; --k) {
    cur[var] = static_cast<std::uint8_t>(k);
    enumerate(nvars, deg - k, var + 1, cur, out);
  }
  cur[var] = 0;
}

}  // namespace

MonomialTable::MonomialTable(int nvars, int order) : nvars_(nvars), order_(order) {
  prefix_.assign(order + 1, 0);
  for (int deg = 0; deg <= order; ++deg) {
    if (nvars == 0) {
      if (deg == 0) exps_.push_back({});
    } else {
      Exponents cur{};
      enumerate(nvars, deg, 0, cur, exps_);
    }
    prefix_[deg] = static_cast<int>(exps_.size());
  }

  const int n = size();
  for (int a = 0; a < n; ++a) {
    const int da = degree_of(exps_[a], nvars);
    for (int b = 0; b < n; ++b) {
      if (da + degree_of(exps_[b], nvars) > order) continue;
      Exponents e{};
      for (int k = 0; k < nvars; ++k) e[k] = exps_[a][k] + exps_[b][k];
      products_.push_back({a, b, index_of(e)});
    }
  }

  derivs_.resize(nvars);
  if (order > 0) {
    for (int axis = 0; axis < nvars; ++axis) {
      for (int src = 0; src < n; ++src) {
        const Exponents& e = exps_[src];
        if (e[axis] == 0) continue;
        Exponents lowered = e;
        lowered[axis] -= 1;
        derivs_[axis].push_back({src, index_of(lowered), static_cast<double>(e[axis])});
      }
    }
  }
}

int MonomialTable::index_of(const Exponents& e) const {
  const int deg = degree_of(e, nvars_);
  if (deg > order_) return -1;
  const int lo = deg == 0 ? 0 : prefix_[deg - 1];
  for (int i = lo; i < prefix_[deg]; ++i) {
    if (std::equal(e.begin(), e.begin() + nvars_, exps_[i].begin())) return i;
  }
  return -1;
}

const MonomialTable& MonomialTable::get(int nvars, int order) {
  if (nvars < 0 || nvars > kMaxAxes || order < 0) {
    throw PreconditionError("jet table: unsupported shape");
  }
  constexpr int kFastOrders = 12;
  thread_local std::array<std::array<const MonomialTable*, kFastOrders>, kMaxAxes + 1> fast{};
  if (order < kFastOrders && fast[nvars][order]) return *fast[nvars][order];
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<MonomialTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot.reset(new MonomialTable(nvars, order));
  if (order < kFastOrders) fast[nvars][order] = slot.get();
  return *slot;
}

Jet::Jet(int nvars, int order) : Jet(&MonomialTable::get(nvars, order)) {}

Jet Jet::constant(Complex c, int nvars, int order) {
  Jet j(nvars, order);
  j.c_[0] = c;
  return j;
}

Jet Jet::variable(double value, int axis, int nvars, int order) {
  Jet j(nvars, order);
  j.c_[0] = value;
  if (order > 0) {
    MonomialTable::Exponents e{};
    e[axis] = 1;
    j.c_[j.table_->index_of(e)] = 1.0;
  }
  return j;
}

Complex Jet::partial(int axis) const {
  if (order() < 1) throw PreconditionError("jet: gradient requested at order 0");
  MonomialTable::Exponents e{};
  e[axis] = 1;
  return c_[table_->index_of(e)];
}

Complex Jet::second(int a, int b) const {
  if (order() < 2) throw PreconditionError("jet: Hessian requested below order 2");
  MonomialTable::Exponents e{};
  e[a] += 1;
  e[b] += 1;
  const Complex c = c_[table_->index_of(e)];
  return a == b ? 2.0 * c : c;
}

double Jet::max_abs(bool value_only) const {
  if (value_only) return std::abs(c_[0]);
  double m = 0;
  for (const Complex& c : c_) m = std::max(m, std::abs(c));
  return m;
}

Jet Jet::truncated(int order) const {
  if (order >= this->order()) return *this;
  Jet r(nvars(), order);
  std::copy(c_.begin(), c_.begin() + r.c_.size(), r.c_.begin());
  return r;
}

Jet Jet::derivative(int axis) const {
  if (order() < 1) throw PreconditionError("jet: order exhausted by differentiation");
  Jet r(nvars(), order() - 1);
  for (const auto& d : table_->derivative(axis)) r.c_[d.dst] += d.factor * c_[d.src];
  return r;
}

Jet Jet::restricted(int keep) const {
  if (keep >= nvars()) return *this;
  Jet r(keep, order());
  for (int i = 0; i < table_->size(); ++i) {
    const auto& e = table_->exponents(i);
    bool drop = false;
    for (int k = keep; k < nvars(); ++k) drop = drop || e[k] != 0;
    if (drop) continue;
    MonomialTable::Exponents ek{};
    std::copy(e.begin(), e.begin() + keep, ek.begin());
    r.c_[r.table_->index_of(ek)] = c_[i];
  }
  return r;
}

Jet Jet::conj() const {
  Jet r = *this;
  for (Complex& c : r.c_) c = std::conj(c);
  return r;
}

Jet Jet::reciprocal() const {
  const Complex g0 = c_[0];
  if (std::abs(g0) == 0.0) throw EvalError("division by zero");
  // 1/g = sum_k (-1)^k (g - g0)^k / g0^(k+1)
  std::vector<Complex> taylor(order() + 1);
  Complex p = 1.0 / g0;
  for (int k = 0; k <= order(); ++k) {
    taylor[k] = p;
    p *= -1.0 / g0;
  }
  return compose(taylor);
}

Jet Jet::compose(const std::vector<Complex>& taylor) const {
  Jet h = *this;
  h.c_[0] = 0.0;
  Jet r = Jet::constant(taylor[order()], nvars(), order());
  for (int k = order() - 1; k >= 0; --k) {
    r = r * h;
    r.c_[0] += taylor[k];
  }
  return r;
}

void Jet::match_order(const Jet& o) {
  if (o.nvars() != nvars()) throw PreconditionError("jet: variable count mismatch");
  if (o.order() < order()) *this = truncated(o.order());
}

Jet& Jet::operator+=(const Jet& o) {
  match_order(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  match_order(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(Complex s) {
  for (Complex& c : c_) c *= s;
  return *this;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (Complex& c : r.c_) c = -c;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.nvars() != b.nvars()) throw PreconditionError("jet: variable count mismatch");
  const Jet& lo = a.order() <= b.order() ? a : b;
  Jet r(lo.table_);
  if (lo.order() == 0) {
    r.c_[0] = a.c_[0] * b.c_[0];
    return r;
  }
  // Plain complex products: std::complex operator* guards against inf/nan.
  const auto* x = reinterpret_cast<const double*>(a.c_.data());
  const auto* y = reinterpret_cast<const double*>(b.c_.data());
  auto* z = reinterpret_cast<double*>(r.c_.data());
  for (const auto& p : lo.table_->products()) {
    const double xr = x[2 * p.a], xi = x[2 * p.a + 1], yr = y[2 * p.b], yi = y[2 * p.b + 1];
    z[2 * p.c] += xr * yr - xi * yi;
    z[2 * p.c + 1] += xr * yi + xi * yr;
  }
  return r;
}

Jet jet_exp(const Jet& g) {
  const Complex e = std::exp(g.value());
  std::vector<Complex> taylor(g.order() + 1);
  double fact = 1;
  for (int k = 0; k <= g.order(); ++k) {
    if (k > 0) fact *= k;
    taylor[k] = e / fact;
  }
  return g.compose(taylor);
}

namespace {

Jet trig(const Jet& g, int phase) {
  const Complex s = std::sin(g.value()), c = std::cos(g.value());
  const Complex cycle[4] = {s, c, -s, -c};
  std::vector<Complex> taylor(g.order() + 1);
  double fact = 1;
  for (int k = 0; k <= g.order(); ++k) {
    if (k > 0) fact *= k;
    taylor[k] = cycle[(k + phase) % 4] / fact;
  }
  return g.compose(taylor);
}

}  // namespace

Jet jet_sin(const Jet& g) { return trig(g, 0); }
Jet jet_cos(const Jet& g) { return trig(g, 1); }

}  // namespace gerbecalc::calculus
