#include "gerbecalc/deligne/cochain.hpp"

#include <algorithm>

#include "gerbecalc/error.hpp"

namespace gerbecalc::deligne {

using calculus::MatrixForm;
using calculus::Rng;

FormJet FormCochain::at(const std::vector<int>& tuple, const EvalPoint& pt) const {
  std::vector<int> v = tuple;
  int sign = 1;
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = a + 1; b < v.size(); ++b) {
      if (v[a] == v[b]) return FormJet(1, pt.nvars(), pt.order);
      if (v[a] > v[b]) sign = -sign;
    }
  std::sort(v.begin(), v.end());
  FormJet r = value(v, pt);
  return sign > 0 ? r : -r;
}

FormCochain delta(const FormCochain& c) {
  FormCochain r;
  r.p = c.p + 1;
  r.q = c.q;
  r.value = [c](const Simplex& s, const EvalPoint& pt) {
    FormJet out(1, pt.nvars(), pt.order);
    for (std::size_t k = 0; k < s.size(); ++k) {
      Simplex face = s;
      face.erase(face.begin() + static_cast<long>(k));
      if (k % 2)
        out -= c.value(face, pt);
      else
        out += c.value(face, pt);
    }
    return out;
  };
  return r;
}

FormCochain exterior_d(const FormCochain& c) {
  FormCochain r;
  r.p = c.p;
  r.q = c.q + 1;
  r.value = [c](const Simplex& s, const EvalPoint& pt) { return calculus::exterior_d(c.value(s, pt.raised())); };
  return r;
}

FormCochain operator+(const FormCochain& a, const FormCochain& b) {
  if (a.p != b.p || a.q != b.q) throw PreconditionError("cochain bidegree mismatch");
  FormCochain r = a;
  r.value = [a, b](const Simplex& s, const EvalPoint& pt) { return a.value(s, pt) + b.value(s, pt); };
  return r;
}

namespace {

FormCochain scaled(const FormCochain& c, double f) {
  FormCochain r = c;
  r.value = [c, f](const Simplex& s, const EvalPoint& pt) { return c.value(s, pt) * calculus::Complex(f); };
  return r;
}

}  // namespace

TotalCochain total_D(const TotalCochain& c) {
  TotalCochain out(c.size() + 1);
  for (std::size_t p = 0; p < c.size(); ++p) {
    const FormCochain dc = exterior_d(c[p]);
    const FormCochain sc = scaled(delta(c[p]), c[p].q % 2 ? -1.0 : 1.0);
    out[p] = out[p].value ? out[p] + dc : dc;
    out[p + 1] = out[p + 1].value ? out[p + 1] + sc : sc;
  }
  return out;
}

FormCochain random_cochain(int p, int q, int dim, std::uint64_t seed) {
  FormCochain r;
  r.p = p;
  r.q = q;
  r.value = [q, dim, seed](const Simplex& s, const EvalPoint& pt) {
    std::string tag = "cochain";
    for (int v : s) tag += ":" + std::to_string(v);
    Rng rng(Rng::derive_seed(tag, seed));
    MatrixForm f(1);
    // Enumerate increasing q-subsets of the axes.
    for (unsigned mask = 0; mask < (1u << dim); ++mask) {
      if (std::popcount(mask) != q) continue;
      std::vector<int> key;
      for (int a = 0; a < dim; ++a)
        if (mask & (1u << a)) key.push_back(a);
      f.add_term(key, calculus::ExprMatrix::scalar(calculus::random_trig(rng, dim, 0.5)));
    }
    return f.eval(pt);
  };
  return r;
}

Jet delta_chi(const DeligneOne& a, const Simplex& s, const EvalPoint& p) {
  return a.chi_at(s[2], s[1], p) * a.chi_at(s[2], s[0], p).reciprocal() * a.chi_at(s[1], s[0], p);
}

}  // namespace gerbecalc::deligne
