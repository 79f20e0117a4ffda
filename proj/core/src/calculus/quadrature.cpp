#include "gerbecalc/calculus/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <map>
#include <mutex>

#include "gerbecalc/error.hpp"

namespace gerbecalc::calculus {

const QuadratureRule& gauss_legendre(int n) {
  if (n < 1) throw PreconditionError("gauss_legendre: need at least one node");
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  QuadratureRule rule;
  auto add = [&](double x) {
    const double dp = boost::math::legendre_p_prime(n, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes.push_back(0.5 * (x + 1.0));
    rule.weights.push_back(0.5 * w);
  };
  // legendre_p_zeros returns the non-negative roots in increasing order.
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  for (auto z = zeros.rbegin(); z != zeros.rend(); ++z)
    if (*z != 0.0) add(-*z);
  for (double z : zeros) add(z);
  return cache.emplace(n, std::move(rule)).first->second;
}

FormJet fiber_integrate(const PointForm& f, const EvalPoint& p, int var, int nodes) {
  if (p.axis_of(var) >= 0) throw PreconditionError("fiber_integrate: fiber variable already an axis");
  const QuadratureRule& rule = gauss_legendre(nodes);
  FormJet acc;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    FormJet part = f(p.with_axis(var, rule.nodes[q])).last_axis_part() * rule.weights[q];
    if (q == 0) {
      acc = part;
    } else {
      acc += part;
    }
  }
  return acc;
}

FormJet fiber_integrate2(const PointForm& f, const EvalPoint& p, int nodes) {
  if (p.axis_of(kVarS) >= 0 || p.axis_of(kVarT) >= 0)
    throw PreconditionError("fiber_integrate2: fiber variables already axes");
  const QuadratureRule& rule = gauss_legendre(nodes);
  FormJet acc;
  bool first = true;
  for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
    const EvalPoint ps = p.with_axis(kVarS, rule.nodes[a]);
    for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
      FormJet part = f(ps.with_axis(kVarT, rule.nodes[b])).last_axis_part().last_axis_part() *
                     (rule.weights[a] * rule.weights[b]);
      if (first) {
        acc = part;
        first = false;
      } else {
        acc += part;
      }
    }
  }
  return acc;
}

}  // namespace gerbecalc::calculus
