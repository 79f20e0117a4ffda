#pragma once

#include <complex>
#include <memory>
#include <string>
#include <string_view>

#include "gerbecalc/calculus/eval_point.hpp"
#include "gerbecalc/calculus/jet.hpp"

namespace gerbecalc::calculus {

// Immutable expression tree over chart coordinates x1..x9 and t.
class ScalarExpr {
 public:
  enum class Op { kConst, kVar, kAdd, kSub, kMul, kDiv, kNeg, kPow, kSin, kCos, kExp, kLog };
  struct Node;

  ScalarExpr();
  ScalarExpr(Complex c);  // NOLINT: implicit constants read naturally in builders
  ScalarExpr(double c) : ScalarExpr(Complex(c)) {}
  static ScalarExpr var(int id);

  Jet eval(const EvalPoint& p) const;
  Complex value_at(const EvalPoint& p) const { return eval(p.with_order(0)).value(); }

  std::string to_string() const;
  bool is_constant() const;
  bool is_zero() const;
  Complex constant_value() const;
  bool depends_on(int var) const;

  friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
  ScalarExpr operator-() const;
  ScalarExpr pow(int k) const;
  friend ScalarExpr sin(const ScalarExpr& a);
  friend ScalarExpr cos(const ScalarExpr& a);
  friend ScalarExpr exp(const ScalarExpr& a);
  friend ScalarExpr log(const ScalarExpr& a);

  const Node& node() const { return *node_; }

  // Unfolded builders used by the parser, so parsed trees mirror the text.
  static ScalarExpr make_add(const ScalarExpr& a, const ScalarExpr& b);
  static ScalarExpr make_sub(const ScalarExpr& a, const ScalarExpr& b);
  static ScalarExpr make_mul(const ScalarExpr& a, const ScalarExpr& b);
  static ScalarExpr make_div(const ScalarExpr& a, const ScalarExpr& b);
  static ScalarExpr make_neg(const ScalarExpr& a);
  static ScalarExpr make_func(Op op, const ScalarExpr& a);
  static ScalarExpr make_pow(const ScalarExpr& a, int k);

 private:
  explicit ScalarExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static ScalarExpr make(Op op, const ScalarExpr& a, const ScalarExpr* b = nullptr);

  std::shared_ptr<const Node> node_;
};

struct ScalarExpr::Node {
  Op op = Op::kConst;
  Complex value{};
  int var = -1;
  int power = 0;
  std::shared_ptr<const Node> a, b;
};

ScalarExpr parse_expr(std::string_view text);

// Name of a grammar variable: "x1".."x9", "t" (and "s" for the internal id).
std::string var_name(int id);

}  // namespace gerbecalc::calculus
