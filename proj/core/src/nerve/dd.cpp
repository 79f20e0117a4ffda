#include <cmath>
#include <complex>
#include <numbers>

#include "gerbecalc/deligne/gerbe.hpp"
#include "gerbecalc/error.hpp"
#include "gerbecalc/nerve/nerve.hpp"

namespace gerbecalc::nerve {

namespace {

using Complex = std::complex<double>;

constexpr double kMaxStep = 0.5;
constexpr int kMaxDepth = 24;

std::vector<double> centroid(const cover::Box& b) {
  std::vector<double> c(b.lo.size());
  for (std::size_t a = 0; a < c.size(); ++a) c[a] = 0.5 * (b.lo[a] + b.hi[a]);
  return c;
}

Complex lambda_value(const deligne::GerbeConn& g, const Simplex& f, const std::vector<double>& x) {
  return g.lambda(f, calculus::make_point(f[0], x, 0)).value();
}

// Branch of log lambda_f: principal at the centroid of U_f, continued along
// the straight segment to x (coordinates of chart f[0]).
struct Branch {
  std::vector<double> base;
  Complex value;
  Complex log_base;
};

// Sum of principal log increments, bisecting until each increment is small.
Complex unwrap(const deligne::GerbeConn& g, const Simplex& f, const std::vector<double>& a, Complex la,
               const std::vector<double>& b, Complex lb, int depth) {
  const Complex step = std::log(lb / la);
  if (std::abs(step.imag()) < kMaxStep || depth >= kMaxDepth) return step;
  std::vector<double> m(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) m[k] = 0.5 * (a[k] + b[k]);
  const Complex lm = lambda_value(g, f, m);
  return unwrap(g, f, a, la, m, lm, depth + 1) + unwrap(g, f, m, lm, b, lb, depth + 1);
}

Complex continue_log(const deligne::GerbeConn& g, const Simplex& f, const Branch& b, const std::vector<double>& x) {
  return b.log_base + unwrap(g, f, b.base, b.value, x, lambda_value(g, f, x), 0);
}

}  // namespace

DDResult dd_cocycle(const deligne::GerbeConn& g, double tol, int extra_points, std::uint64_t seed) {
  const cover::Cover& c = *g.cover;
  const int d = c.dim();
  const AbstractComplex k = AbstractComplex::from_cover(c);
  const auto& faces = k.simplices(2);
  std::vector<Branch> branch(faces.size());
  for (std::size_t i = 0; i < faces.size(); ++i) {
    branch[i].base = centroid(c.intersection(faces[i]));
    branch[i].value = lambda_value(g, faces[i], branch[i].base);
    branch[i].log_base = std::log(branch[i].value);
  }
  DDResult out;
  out.cocycle.q = 3;
  const auto& tets = k.simplices(3);
  const double two_pi = 2.0 * std::numbers::pi;
  for (const Simplex& t : tets) {
    std::vector<std::vector<double>> points{centroid(c.intersection(t))};
    for (const auto& sp : c.sample_points(t, extra_points, seed)) points.push_back(sp.coords[0]);
    double first = 0.0;
    for (std::size_t n = 0; n < points.size(); ++n) {
      std::vector<double> p0(points[n].begin(), points[n].begin() + d);
      const calculus::EvalPoint p = calculus::make_point(t[0], p0, 0);
      Complex sum = 0.0;
      for (int drop = 0; drop < 4; ++drop) {
        Simplex f;
        for (int j = 0; j < 4; ++j)
          if (j != drop) f.push_back(t[j]);
        const calculus::EvalPoint q = c.to_chart(p, f[0]);
        const std::vector<double> x(q.values.begin(), q.values.begin() + d);
        const Complex l = continue_log(g, f, branch[k.index(f)], x);
        sum += drop % 2 == 0 ? l : -l;
      }
      const Complex v = sum / Complex(0.0, two_pi);
      const double frac = std::max(std::abs(v.real() - std::round(v.real())), std::abs(v.imag()));
      out.max_fraction = std::max(out.max_fraction, frac);
      if (n == 0)
        first = v.real();
      else
        out.max_spread = std::max(out.max_spread, std::abs(v.real() - first));
      ++out.points;
    }
    out.cocycle.values.push_back(static_cast<std::int64_t>(std::llround(first)));
  }
  if (!(out.max_fraction <= tol) || !(out.max_spread <= tol))
    throw GluingError("dd_cocycle: delta log lambda is not integral (residual " + std::to_string(out.max_fraction) +
                      ", spread " + std::to_string(out.max_spread) + ")");
  return out;
}

}  // namespace gerbecalc::nerve
