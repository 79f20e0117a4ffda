#pragma once

#include <functional>
#include <vector>

#include "gerbecalc/calculus/eval_point.hpp"
#include "gerbecalc/calculus/form.hpp"

namespace gerbecalc::calculus {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [0,1]; cached per node count.
const QuadratureRule& gauss_legendre(int n);

using PointForm = std::function<FormJet(const EvalPoint&)>;

// Integration along the fiber of [0,1] in variable `var` (t or s), which must
// not be an axis of p. The fiber variable is appended as the last axis, so the
// dx_I ^ d(var) component integrates to dx_I without sign.
FormJet fiber_integrate(const PointForm& f, const EvalPoint& p, int var, int nodes);

// Double fiber integral over (s,t) in [0,1]^2, t last: dx_I ^ ds ^ dt -> dx_I.
FormJet fiber_integrate2(const PointForm& f, const EvalPoint& p, int nodes);

}  // namespace gerbecalc::calculus
