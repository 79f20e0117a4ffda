#pragma once

#include <array>
#include <vector>

#include "gerbecalc/calculus/jet.hpp"

namespace gerbecalc::calculus {

// Variable ids. x1..x9 are 0..8; t is the path parameter; s is the bigon
// parameter and is internal (not part of the expression grammar).
inline constexpr int kVarT = 9;
inline constexpr int kVarS = 10;
inline constexpr int kVarCount = 11;

// A point at which forms are evaluated: coordinates in one chart, the list of
// variables that carry jet directions (in form-axis order), and the jet order.
struct EvalPoint {
  int chart = 0;
  std::array<double, kVarCount> values{};
  std::vector<int> axes;
  int order = 0;

  int nvars() const { return static_cast<int>(axes.size()); }
  int axis_of(int var) const {
    for (int k = 0; k < nvars(); ++k)
      if (axes[k] == var) return k;
    return -1;
  }
  Jet var_jet(int var) const {
    const int a = axis_of(var);
    if (a < 0) return Jet::constant(values[var], nvars(), order);
    return Jet::variable(values[var], a, nvars(), order);
  }
  Jet constant(Complex c) const { return Jet::constant(c, nvars(), order); }

  EvalPoint raised(int extra = 1) const {
    EvalPoint p = *this;
    p.order += extra;
    return p;
  }
  EvalPoint with_order(int k) const {
    EvalPoint p = *this;
    p.order = k;
    return p;
  }
  EvalPoint with_axis(int var, double value) const {
    EvalPoint p = *this;
    p.values[var] = value;
    if (axis_of(var) < 0) p.axes.push_back(var);
    return p;
  }
  EvalPoint with_value(int var, double value) const {
    EvalPoint p = *this;
    p.values[var] = value;
    return p;
  }
};

// A point on the d-torus chart `chart` with coordinates x and jet axes x1..xd.
EvalPoint make_point(int chart, const std::vector<double>& x, int order);

}  // namespace gerbecalc::calculus
