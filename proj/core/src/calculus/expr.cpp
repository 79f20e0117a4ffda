#include "gerbecalc/calculus/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "gerbecalc/error.hpp"

namespace gerbecalc::calculus {

using Op = ScalarExpr::Op;

ScalarExpr::ScalarExpr() : ScalarExpr(Complex(0.0)) {}

ScalarExpr::ScalarExpr(Complex c) {
  auto n = std::make_shared<Node>();
  n->op = Op::kConst;
  n->value = c;
  node_ = std::move(n);
}

ScalarExpr ScalarExpr::var(int id) {
  if (id < 0 || id >= kVarCount) throw PreconditionError("expression: bad variable id");
  auto n = std::make_shared<Node>();
  n->op = Op::kVar;
  n->var = id;
  return ScalarExpr(std::move(n));
}

ScalarExpr ScalarExpr::make(Op op, const ScalarExpr& a, const ScalarExpr* b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = a.node_;
  if (b) n->b = b->node_;
  return ScalarExpr(std::move(n));
}

bool ScalarExpr::is_constant() const { return node_->op == Op::kConst; }
bool ScalarExpr::is_zero() const { return is_constant() && node_->value == Complex(0.0); }
Complex ScalarExpr::constant_value() const { return node_->value; }

bool ScalarExpr::depends_on(int var) const {
  const Node& n = *node_;
  if (n.op == Op::kVar) return n.var == var;
  bool r = false;
  if (n.a) r = r || ScalarExpr(n.a).depends_on(var);
  if (n.b) r = r || ScalarExpr(n.b).depends_on(var);
  return r;
}

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
  if (a.is_constant() && b.is_constant()) return a.constant_value() + b.constant_value();
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return ScalarExpr::make(Op::kAdd, a, &b);
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
  if (a.is_constant() && b.is_constant()) return a.constant_value() - b.constant_value();
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return ScalarExpr::make(Op::kSub, a, &b);
}

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  if (a.is_constant() && b.is_constant()) return a.constant_value() * b.constant_value();
  if (a.is_zero() || b.is_zero()) return ScalarExpr();
  if (a.is_constant() && a.constant_value() == Complex(1.0)) return b;
  if (b.is_constant() && b.constant_value() == Complex(1.0)) return a;
  return ScalarExpr::make(Op::kMul, a, &b);
}

ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
  if (b.is_constant() && b.constant_value() == Complex(1.0)) return a;
  if (a.is_zero() && !(b.is_constant() && b.is_zero())) return ScalarExpr();
  return ScalarExpr::make(Op::kDiv, a, &b);
}

ScalarExpr ScalarExpr::operator-() const {
  if (is_constant()) return -constant_value();
  if (node_->op == Op::kNeg) return ScalarExpr(node_->a);
  return make(Op::kNeg, *this);
}

ScalarExpr ScalarExpr::pow(int k) const {
  if (k == 1) return *this;
  if (k == 0) return ScalarExpr(1.0);
  ScalarExpr r = make(Op::kPow, *this);
  std::const_pointer_cast<Node>(r.node_)->power = k;
  return r;
}

ScalarExpr sin(const ScalarExpr& a) {
  if (a.is_constant()) return std::sin(a.constant_value());
  return ScalarExpr::make(Op::kSin, a);
}
ScalarExpr cos(const ScalarExpr& a) {
  if (a.is_constant()) return std::cos(a.constant_value());
  return ScalarExpr::make(Op::kCos, a);
}
ScalarExpr exp(const ScalarExpr& a) {
  if (a.is_constant()) return std::exp(a.constant_value());
  return ScalarExpr::make(Op::kExp, a);
}
ScalarExpr log(const ScalarExpr& a) { return ScalarExpr::make(Op::kLog, a); }

namespace {

Jet eval_node(const ScalarExpr::Node& n, const EvalPoint& p);

Jet eval_child(const std::shared_ptr<const ScalarExpr::Node>& c, const EvalPoint& p) {
  return eval_node(*c, p);
}

Jet int_power(const Jet& base, int k) {
  if (k < 0) {
    if (std::abs(base.value()) == 0.0) throw EvalError("division by zero");
    return int_power(base, -k).reciprocal();
  }
  Jet result = Jet::constant(1.0, base.nvars(), base.order());
  Jet b = base;
  while (k > 0) {
    if (k & 1) result = result * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return result;
}

Jet eval_node(const ScalarExpr::Node& n, const EvalPoint& p) {
  switch (n.op) {
    case Op::kConst:
      return p.constant(n.value);
    case Op::kVar:
      return p.var_jet(n.var);
    case Op::kAdd:
      return eval_child(n.a, p) + eval_child(n.b, p);
    case Op::kSub:
      return eval_child(n.a, p) - eval_child(n.b, p);
    case Op::kMul:
      return eval_child(n.a, p) * eval_child(n.b, p);
    case Op::kDiv: {
      Jet den = eval_child(n.b, p);
      if (std::abs(den.value()) == 0.0) throw EvalError("division by zero");
      return eval_child(n.a, p) * den.reciprocal();
    }
    case Op::kNeg:
      return -eval_child(n.a, p);
    case Op::kPow:
      return int_power(eval_child(n.a, p), n.power);
    case Op::kSin:
    case Op::kCos: {
      Jet g = eval_child(n.a, p);
      const Complex s = std::sin(g.value()), c = std::cos(g.value());
      // Derivative cycle of sin starting at phase 0, of cos at phase 1.
      const Complex cycle[4] = {s, c, -s, -c};
      const int phase = n.op == Op::kSin ? 0 : 1;
      std::vector<Complex> taylor(g.order() + 1);
      double fact = 1;
      for (int k = 0; k <= g.order(); ++k) {
        if (k > 0) fact *= k;
        taylor[k] = cycle[(k + phase) % 4] / fact;
      }
      return g.compose(taylor);
    }
    case Op::kExp: {
      Jet g = eval_child(n.a, p);
      const Complex e = std::exp(g.value());
      std::vector<Complex> taylor(g.order() + 1);
      double fact = 1;
      for (int k = 0; k <= g.order(); ++k) {
        if (k > 0) fact *= k;
        taylor[k] = e / fact;
      }
      return g.compose(taylor);
    }
    case Op::kLog: {
      Jet g = eval_child(n.a, p);
      const Complex g0 = g.value();
      if (std::abs(g0) == 0.0) throw EvalError("log of zero");
      std::vector<Complex> taylor(g.order() + 1);
      taylor[0] = std::log(g0);
      Complex pw = 1.0;
      for (int k = 1; k <= g.order(); ++k) {
        pw /= g0;
        taylor[k] = (k % 2 == 1 ? 1.0 : -1.0) * pw / static_cast<double>(k);
      }
      return g.compose(taylor);
    }
  }
  throw EvalError("expression: corrupt node");
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_constant(Complex c) {
  const double re = c.real(), im = c.imag();
  if (im == 0.0) return re < 0 || std::signbit(re) ? "(" + format_real(re) + ")" : format_real(re);
  if (re == 0.0) {
    if (im == 1.0) return "i";
    return "(" + format_real(im) + "*i)";
  }
  std::string s = "(" + format_real(re);
  s += im < 0 ? "-" + format_real(-im) : "+" + format_real(im);
  return s + "*i)";
}

void print_node(const ScalarExpr::Node& n, std::string& out) {
  auto child = [&](const std::shared_ptr<const ScalarExpr::Node>& c) { print_node(*c, out); };
  auto binary = [&](const char* op) {
    out += '(';
    child(n.a);
    out += op;
    child(n.b);
    out += ')';
  };
  auto func = [&](const char* name) {
    out += name;
    out += '(';
    child(n.a);
    out += ')';
  };
  switch (n.op) {
    case Op::kConst:
      out += format_constant(n.value);
      return;
    case Op::kVar:
      out += var_name(n.var);
      return;
    case Op::kAdd:
      return binary(" + ");
    case Op::kSub:
      return binary(" - ");
    case Op::kMul:
      return binary("*");
    case Op::kDiv:
      return binary("/");
    case Op::kNeg:
      out += "(-";
      child(n.a);
      out += ')';
      return;
    case Op::kPow:
      if (n.power < 0) out += "(1/";
      out += '(';
      child(n.a);
      out += ")^" + std::to_string(std::abs(n.power));
      if (n.power < 0) out += ')';
      return;
    case Op::kSin:
      return func("sin");
    case Op::kCos:
      return func("cos");
    case Op::kExp:
      return func("exp");
    case Op::kLog:
      return func("log");
  }
}

class ExprParserImpl {
 public:
  explicit ExprParserImpl(std::string_view text) : s_(text) {}

  ScalarExpr parse() {
    ScalarExpr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  ScalarExpr expr() {
    ScalarExpr e = term();
    while (true) {
      if (accept('+')) {
        e = ScalarExpr::make_add(e, term());
      } else if (accept('-')) {
        e = ScalarExpr::make_sub(e, term());
      } else {
        return e;
      }
    }
  }

  ScalarExpr term() {
    ScalarExpr e = factor();
    while (true) {
      if (accept('*')) {
        e = ScalarExpr::make_mul(e, factor());
      } else if (accept('/')) {
        e = ScalarExpr::make_div(e, factor());
      } else {
        return e;
      }
    }
  }

  ScalarExpr factor() {
    if (accept('-')) return ScalarExpr::make_neg(factor());
    if (accept('+')) return factor();
    ScalarExpr base = atom();
    if (accept('^')) {
      skip_ws();
      bool paren = accept('(');
      skip_ws();
      bool neg = accept('-');
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == start) fail("expected integer exponent");
      int k = std::stoi(std::string(s_.substr(start, pos_ - start)));
      if (paren) expect(')');
      return ScalarExpr::make_pow(base, neg ? -k : k);
    }
    return base;
  }

  ScalarExpr atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ScalarExpr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  ScalarExpr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      const std::size_t exp_start = pos_;
      digits();
      if (pos_ == exp_start) pos_ = save;
    }
    const std::string tok(s_.substr(start, pos_ - start));
    if (tok == ".") {
      pos_ = start;
      fail("malformed number");
    }
    return ScalarExpr(std::stod(tok));
  }

  ScalarExpr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string id(s_.substr(start, pos_ - start));
    if (id == "pi") return ScalarExpr(std::numbers::pi);
    if (id == "i") return ScalarExpr(Complex(0.0, 1.0));
    if (id == "t") return ScalarExpr::var(kVarT);
    if (id.size() == 2 && id[0] == 'x' && id[1] >= '1' && id[1] <= '9') return ScalarExpr::var(id[1] - '1');
    if (id == "sin" || id == "cos" || id == "exp" || id == "log") {
      if (!accept('(')) fail("expected '(' after " + id);
      ScalarExpr arg = expr();
      expect(')');
      if (id == "sin") return ScalarExpr::make_func(Op::kSin, arg);
      if (id == "cos") return ScalarExpr::make_func(Op::kCos, arg);
      if (id == "exp") return ScalarExpr::make_func(Op::kExp, arg);
      return ScalarExpr::make_func(Op::kLog, arg);
    }
    pos_ = start;
    fail("unknown identifier '" + id + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Jet ScalarExpr::eval(const EvalPoint& p) const { return eval_node(*node_, p); }

std::string ScalarExpr::to_string() const {
  std::string out;
  print_node(*node_, out);
  return out;
}

ScalarExpr ScalarExpr::make_add(const ScalarExpr& a, const ScalarExpr& b) { return make(Op::kAdd, a, &b); }
ScalarExpr ScalarExpr::make_sub(const ScalarExpr& a, const ScalarExpr& b) { return make(Op::kSub, a, &b); }
ScalarExpr ScalarExpr::make_mul(const ScalarExpr& a, const ScalarExpr& b) { return make(Op::kMul, a, &b); }
ScalarExpr ScalarExpr::make_div(const ScalarExpr& a, const ScalarExpr& b) { return make(Op::kDiv, a, &b); }
ScalarExpr ScalarExpr::make_neg(const ScalarExpr& a) { return make(Op::kNeg, a); }
ScalarExpr ScalarExpr::make_func(Op op, const ScalarExpr& a) { return make(op, a); }
ScalarExpr ScalarExpr::make_pow(const ScalarExpr& a, int k) {
  ScalarExpr r = make(Op::kPow, a);
  std::const_pointer_cast<Node>(r.node_)->power = k;
  return r;
}

ScalarExpr parse_expr(std::string_view text) { return ExprParserImpl(text).parse(); }

std::string var_name(int id) {
  if (id >= 0 && id < 9) return "x" + std::to_string(id + 1);
  if (id == kVarT) return "t";
  if (id == kVarS) return "s";
  return "?";
}

EvalPoint make_point(int chart, const std::vector<double>& x, int order) {
  EvalPoint p;
  p.chart = chart;
  for (std::size_t k = 0; k < x.size(); ++k) {
    p.values[k] = x[k];
    p.axes.push_back(static_cast<int>(k));
  }
  p.order = order;
  return p;
}

}  // namespace gerbecalc::calculus
