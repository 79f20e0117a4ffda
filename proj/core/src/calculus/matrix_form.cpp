#include "gerbecalc/calculus/matrix_form.hpp"

#include <algorithm>
#include <cctype>

#include "gerbecalc/calculus/quadrature.hpp"
#include "gerbecalc/error.hpp"

namespace gerbecalc::calculus {

ExprMatrix ExprMatrix::identity(int n) {
  ExprMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = ScalarExpr(1.0);
  return m;
}

JetMatrix ExprMatrix::eval(const EvalPoint& p) const {
  JetMatrix m(n_, p.nvars(), p.order);
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c)
      if (!(*this)(r, c).is_zero()) m(r, c) = (*this)(r, c).eval(p);
  return m;
}

ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b) {
  if (a.size() != b.size()) throw PreconditionError("expression matrix size mismatch");
  ExprMatrix r(a.size());
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) {
      ScalarExpr acc;
      for (int k = 0; k < a.size(); ++k) acc = acc + a(i, k) * b(k, j);
      r(i, j) = acc;
    }
  return r;
}

ExprMatrix operator+(const ExprMatrix& a, const ExprMatrix& b) {
  if (a.size() != b.size()) throw PreconditionError("expression matrix size mismatch");
  ExprMatrix r(a.size());
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

ExprMatrix operator*(const ScalarExpr& s, const ExprMatrix& a) {
  ExprMatrix r(a.size());
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) r(i, j) = s * a(i, j);
  return r;
}

MatrixForm MatrixForm::function(const ExprMatrix& m) {
  MatrixForm f(m.size());
  f.terms_.emplace(Key{}, m);
  return f;
}

MatrixForm MatrixForm::scalar(const ScalarExpr& s, Key key) {
  MatrixForm f(1);
  f.add_term(std::move(key), ExprMatrix::scalar(s));
  return f;
}

void MatrixForm::add_term(Key vars, const ExprMatrix& coeff) {
  if (coeff.size() != n_) throw PreconditionError("form term size mismatch");
  int inversions = 0;
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (std::size_t j = i + 1; j < vars.size(); ++j) {
      if (vars[i] == vars[j]) return;
      if (vars[i] > vars[j]) ++inversions;
    }
  std::sort(vars.begin(), vars.end());
  ExprMatrix c = inversions % 2 ? ScalarExpr(-1.0) * coeff : coeff;
  auto it = terms_.find(vars);
  if (it == terms_.end()) {
    terms_.emplace(std::move(vars), c);
  } else {
    it->second = it->second + c;
  }
}

int MatrixForm::degree() const {
  if (terms_.empty()) return 0;
  const int d = static_cast<int>(terms_.begin()->first.size());
  for (const auto& [k, m] : terms_)
    if (static_cast<int>(k.size()) != d) return -1;
  return d;
}

bool MatrixForm::depends_on(int var) const {
  for (const auto& [k, m] : terms_) {
    if (std::find(k.begin(), k.end(), var) != k.end()) return true;
    for (int r = 0; r < m.size(); ++r)
      for (int c = 0; c < m.size(); ++c)
        if (m(r, c).depends_on(var)) return true;
  }
  return false;
}

FormJet MatrixForm::eval(const EvalPoint& p) const {
  FormJet out(n_, p.nvars(), p.order);
  for (const auto& [key, coeff] : terms_) {
    unsigned mask = 0;
    std::vector<int> positions;
    bool absent = false;
    for (int v : key) {
      const int a = p.axis_of(v);
      if (a < 0) {
        absent = true;
        break;
      }
      positions.push_back(a);
      mask |= 1u << a;
    }
    if (absent) continue;
    int inversions = 0;
    for (std::size_t i = 0; i < positions.size(); ++i)
      for (std::size_t j = i + 1; j < positions.size(); ++j)
        if (positions[i] > positions[j]) ++inversions;
    JetMatrix m = coeff.eval(p);
    if (inversions % 2) m = -m;
    out.add_term(mask, m);
  }
  return out;
}

std::string MatrixForm::to_string() const {
  if (n_ != 1) throw PreconditionError("to_string: scalar forms only");
  if (terms_.empty()) return "(0)";
  std::string out;
  for (const auto& [key, coeff] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + coeff(0, 0).to_string() + ")";
    for (std::size_t i = 0; i < key.size(); ++i) {
      out += i == 0 ? " " : "^";
      out += key[i] == kVarT ? std::string("dt") : "d" + var_name(key[i]);
    }
  }
  return out;
}

MatrixForm operator+(const MatrixForm& a, const MatrixForm& b) {
  if (a.size() != b.size()) throw PreconditionError("form size mismatch");
  MatrixForm r = a;
  for (const auto& [k, m] : b.terms()) r.add_term(k, m);
  return r;
}

MatrixForm operator*(const ScalarExpr& s, const MatrixForm& a) {
  MatrixForm r(a.size());
  for (const auto& [k, m] : a.terms()) r.add_term(k, s * m);
  return r;
}

MatrixForm wedge(const MatrixForm& a, const MatrixForm& b) {
  if (a.size() != b.size()) throw PreconditionError("wedge: matrix size mismatch");
  MatrixForm r(a.size());
  for (const auto& [ka, ma] : a.terms())
    for (const auto& [kb, mb] : b.terms()) {
      MatrixForm::Key k = ka;
      k.insert(k.end(), kb.begin(), kb.end());
      r.add_term(k, ma * mb);
    }
  return r;
}

namespace {

std::size_t skip_ws(std::string_view s, std::size_t pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  return pos;
}

}  // namespace

MatrixForm parse_form(std::string_view s) {
  MatrixForm form(1);
  std::size_t pos = skip_ws(s, 0);
  if (pos == s.size()) throw ParseError("empty form", pos);
  bool first = true;
  while (pos < s.size()) {
    double sign = 1.0;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1.0 : 1.0;
      pos = skip_ws(s, pos + 1);
    } else if (!first) {
      throw ParseError("expected '+' or '-' between form terms", pos);
    }
    first = false;
    ScalarExpr coeff(1.0);
    bool have_coeff = false;
    if (pos < s.size() && s[pos] == '(') {
      int depth = 0;
      std::size_t end = pos;
      for (; end < s.size(); ++end) {
        if (s[end] == '(') ++depth;
        if (s[end] == ')' && --depth == 0) break;
      }
      if (end == s.size()) throw ParseError("unbalanced parenthesis", pos);
      try {
        coeff = parse_expr(s.substr(pos + 1, end - pos - 1));
      } catch (const ParseError& e) {
        throw ParseError("in form coefficient", pos + 1 + e.offset());
      }
      have_coeff = true;
      pos = skip_ws(s, end + 1);
    }
    MatrixForm::Key key;
    while (pos < s.size() && s[pos] == 'd') {
      if (pos + 1 < s.size() && s[pos + 1] == 't') {
        key.push_back(kVarT);
        pos += 2;
      } else if (pos + 2 < s.size() && s[pos + 1] == 'x' && s[pos + 2] >= '1' && s[pos + 2] <= '9') {
        key.push_back(s[pos + 2] - '1');
        pos += 3;
      } else {
        throw ParseError("malformed basis element", pos);
      }
      pos = skip_ws(s, pos);
      if (pos < s.size() && s[pos] == '^') {
        pos = skip_ws(s, pos + 1);
        if (pos >= s.size() || s[pos] != 'd') throw ParseError("expected basis element after '^'", pos);
      }
    }
    if (!have_coeff && key.empty()) throw ParseError("expected '(' or basis element", pos);
    for (std::size_t i = 0; i < key.size(); ++i)
      for (std::size_t j = i + 1; j < key.size(); ++j)
        if (key[i] == key[j]) throw ParseError("repeated basis element", pos);
    form.add_term(key, ExprMatrix::scalar(ScalarExpr(sign) * coeff));
    pos = skip_ws(s, pos);
  }
  return form;
}

FormJet fiber_integrate_I(const MatrixForm& a, const EvalPoint& p, int nodes) {
  return fiber_integrate([&](const EvalPoint& q) { return a.eval(q); }, p, kVarT, nodes);
}

}  // namespace gerbecalc::calculus
