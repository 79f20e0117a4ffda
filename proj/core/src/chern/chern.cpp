#include "gerbecalc/chern/chern.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <optional>

#include "gerbecalc/calculus/quadrature.hpp"
#include "gerbecalc/error.hpp"

namespace gerbecalc::chern {

using calculus::kVarS;
using calculus::kVarT;
using deligne::form_residual;

namespace {

FormJet twisted_curvature(const TwistedConnection& c, const EvalPoint& p, const FormJet& b) {
  FormJet r = c.curvature(p);
  r -= calculus::wedge(b, FormJet::identity(c.rank(), p.nvars(), p.order));
  return r;
}

FormJet ch_total(const TwistedConnection& c, const EvalPoint& p, const FormJet& b) {
  FormJet out = FormJet::scalar(p.constant(static_cast<double>(c.rank())));
  if (c.rank() == 0) return out;
  const FormJet x = twisted_curvature(c, p, b);
  FormJet power = x;
  double fact = 1.0;
  for (int m = 1; 2 * m <= p.nvars(); ++m) {
    if (m > 1) power = calculus::wedge(power, x);
    fact *= m;
    out += calculus::trace_form(power) * Complex(1.0 / fact);
  }
  return out;
}

// ch at the fiber nodes over one base point. B does not see the fiber
// variables, so it is evaluated once.
PointForm fiber_ch(const ConnPtr& c, std::optional<FormJet>* b) {
  return [&c, b](const EvalPoint& q) {
    if (!*b) *b = c->gerbe->B_at(q);
    return ch_total(*c, q, **b);
  };
}

}  // namespace

FormJet twisted_curvature(const TwistedConnection& c, const EvalPoint& p) {
  return twisted_curvature(c, p, c.gerbe->B_at(p));
}

FormJet ch_m(const TwistedConnection& c, const EvalPoint& p, int m) {
  if (m < 0) throw PreconditionError("ch_m: negative degree");
  if (m == 0) return FormJet::scalar(p.constant(static_cast<double>(c.rank())));
  return calculus::trace_form(calculus::wedge_power(twisted_curvature(c, p), m));
}

FormJet ch_total(const TwistedConnection& c, const EvalPoint& p) {
  if (c.rank() == 0) return FormJet::scalar(p.constant(0.0));
  return ch_total(c, p, c.gerbe->B_at(p));
}

FormJet d_plus_H(const PointForm& f, const GerbeConn& g, const EvalPoint& p) {
  FormJet r = calculus::exterior_d(f(p.raised()));
  r += calculus::wedge(g.H_at(p), f(p));
  return r;
}

FormJet cs(const ConnPtr& path, const EvalPoint& p, int nodes) {
  std::optional<FormJet> b;
  return calculus::fiber_integrate(fiber_ch(path, &b), p, kVarT, nodes);
}

FormJet bigon_primitive(const ConnPtr& family, const EvalPoint& p, int nodes) {
  std::optional<FormJet> b;
  return calculus::fiber_integrate2(fiber_ch(family, &b), p, nodes);
}

FormJet odd_chern(const ConnPtr& gamma, const MorphismPtr& phi, const EvalPoint& p, int nodes) {
  return cs(bundle::gauge_path(gamma, phi), p, nodes);
}

PointForm ch_form(const ConnPtr& c) {
  return [c](const EvalPoint& p) { return ch_total(*c, p); };
}

PointForm cs_form(const ConnPtr& path, int nodes) {
  return [path, nodes](const EvalPoint& p) { return cs(path, p, nodes); };
}

PointForm odd_chern_form(const ConnPtr& gamma, const MorphismPtr& phi, int nodes) {
  return cs_form(bundle::gauge_path(gamma, phi), nodes);
}

PointForm dH_form(const PointForm& f, const deligne::GerbePtr& g) {
  return [f, g](const EvalPoint& p) { return d_plus_H(f, *g, p); };
}

PointForm wedge_form(const PointForm& a, const PointForm& b) {
  return [a, b](const EvalPoint& p) { return calculus::wedge(a(p), b(p)); };
}

PointForm sum_form(const PointForm& a, const PointForm& b, Complex scale_b) {
  return [a, b, scale_b](const EvalPoint& p) { return a(p) + b(p) * scale_b; };
}

PointForm zero_form() {
  return [](const EvalPoint& p) { return FormJet(1, p.nvars(), p.order); };
}

PointForm exp_form(const calculus::MatrixForm& xi, int top_dim, double sign) {
  return [xi, top_dim, sign](const EvalPoint& p) { return calculus::exp_even_form(xi.eval(p) * sign, top_dim); };
}

Residual max_over_torus(const cover::Cover& c, const SampleConfig& cfg, const std::string& name,
                        const std::function<double(const EvalPoint&)>& r) {
  Residual out{name};
  const auto& e0 = c.simplices(0);
  for (const auto& s : e0)
    for (const auto& sp : c.sample_points(s, cfg.per_simplex(e0.size()), cfg.seed))
      out.add(r(deligne::sample_eval_point(s, sp, 0, 0)));
  return out;
}

Residual glue_residual(const PointForm& f, const cover::Cover& c, const SampleConfig& cfg, const std::string& name) {
  Residual out{name};
  const auto& e1 = c.simplices(1);
  for (const auto& s : e1)
    for (const auto& sp : c.sample_points(s, cfg.per_simplex(e1.size()), cfg.seed)) {
      const EvalPoint p = deligne::sample_eval_point(s, sp, 0, 0);
      out.add(form_residual(f(p) - f(c.to_chart(p, s[1]))));
    }
  return out;
}

Residual difference(const PointForm& a, const PointForm& b, const cover::Cover& c, const SampleConfig& cfg,
                    const std::string& name) {
  return max_over_torus(c, cfg, name, [&](const EvalPoint& p) { return form_residual(a(p) - b(p)); });
}

ResidualReport check_ch_glue(const ConnPtr& c, const SampleConfig& cfg) {
  Residual r = glue_residual(ch_form(c), c->cover(), cfg, "ch_glue");
  for (int m = 1; 2 * m <= c->cover().dim(); ++m)
    r.merge(glue_residual([c, m](const EvalPoint& p) { return ch_m(*c, p, m); }, c->cover(), cfg, "ch_glue"));
  return {r};
}

ResidualReport check_ch_closed(const ConnPtr& c, const SampleConfig& cfg) {
  const GerbeConn& g = *c->gerbe;
  Residual closed = max_over_torus(c->cover(), cfg, "dH_ch", [&](const EvalPoint& p) {
    return form_residual(d_plus_H(ch_form(c), g, p));
  });
  Residual graded = max_over_torus(c->cover(), cfg, "graded", [&](const EvalPoint& p) {
    double worst = 0;
    for (int m = 1; 2 * m <= c->cover().dim(); ++m) {
      FormJet r = calculus::exterior_d(ch_m(*c, p.raised(), m));
      r += calculus::wedge(ch_m(*c, p, m - 1), g.H_at(p)) * Complex(m);
      worst = std::max(worst, form_residual(r));
    }
    return worst;
  });
  return {closed, graded};
}

ResidualReport check_ch_additive(const ConnPtr& a, const ConnPtr& b, const SampleConfig& cfg) {
  const ConnPtr s = bundle::direct_sum_conn(a, b);
  return {difference(ch_form(s), sum_form(ch_form(a), ch_form(b)), a->cover(), cfg, "ch_additive")};
}

ResidualReport check_ch_rescale(const ConnPtr& c, const calculus::MatrixForm& xi, const SampleConfig& cfg) {
  const auto gx = deligne::shift_by_xi(c->gerbe, calculus::ScalarExpr(-1.0) * xi);
  const ConnPtr cx = bundle::retag_conn(c, bundle::retag_bundle(c->bundle, gx));
  const PointForm rhs = wedge_form(ch_form(c), exp_form(xi, c->cover().dim(), 1.0));
  return {difference(ch_form(cx), rhs, c->cover(), cfg, "ch_rescale")};
}

ResidualReport check_transgression(const ConnPtr& path, const SampleConfig& cfg, int nodes) {
  const PointForm lhs = sum_form(ch_form(bundle::path_at(path, 0.0)), ch_form(bundle::path_at(path, 1.0)), -1.0);
  return {difference(lhs, dH_form(cs_form(path, nodes), path->gerbe), path->cover(), cfg, "transgression")};
}

ResidualReport check_bigon(const ConnPtr& alpha, const ConnPtr& gamma, const SampleConfig& cfg, int nodes) {
  const cover::Cover& cov = alpha->cover();
  for (double t : {0.0, 1.0}) {
    const Residual r = max_over_torus(cov, cfg, "endpoints", [&](const EvalPoint& p) {
      const EvalPoint q = p.with_value(kVarT, t);
      return form_residual(alpha->at(q) - gamma->at(q));
    });
    if (r.max > 1e-8) throw PreconditionError("bigon: paths do not share endpoints");
  }
  const ConnPtr family = bundle::bigon_family(alpha, gamma);
  const PointForm lhs = sum_form(cs_form(gamma, nodes), cs_form(alpha, nodes), -1.0);
  const PointForm prim = [family, nodes](const EvalPoint& p) { return bigon_primitive(family, p, nodes); };
  return {difference(lhs, dH_form(prim, alpha->gerbe), cov, cfg, "bigon")};
}

ResidualReport check_cs_gauge(const ConnPtr& path, const MorphismPtr& phi, const SampleConfig& cfg, int nodes) {
  const ConnPtr pulled = bundle::gauge_path_pullback(path, phi);
  const ConnPtr g0 = bundle::path_at(path, 0.0);
  const ConnPtr g0p = bundle::gauge_transform(g0, phi, g0->bundle);
  return {difference(cs_form(pulled, nodes), cs_form(path, nodes), path->cover(), cfg, "cs_gauge"),
          difference(ch_form(g0p), ch_form(g0), path->cover(), cfg, "ch_gauge")};
}

ResidualReport check_stokes(const calculus::MatrixForm& w, const cover::Cover& c, const SampleConfig& cfg, int nodes) {
  const int n = w.degree();
  if (n < 1) throw PreconditionError("stokes: form of pure degree >= 1 required");
  const double sign = (n - 1) % 2 ? -1.0 : 1.0;
  const PointForm wf = [w](const EvalPoint& p) { return w.eval(p); };
  const PointForm dw = [w](const EvalPoint& p) { return calculus::exterior_d(w.eval(p.raised())); };
  return {max_over_torus(c, cfg, "stokes", [&](const EvalPoint& p) {
    FormJet r = calculus::exterior_d(calculus::fiber_integrate(wf, p.raised(), kVarT, nodes));
    r -= calculus::fiber_integrate(dw, p, kVarT, nodes);
    r -= (w.eval(p.with_value(kVarT, 1.0)) - w.eval(p.with_value(kVarT, 0.0))) * sign;
    return form_residual(r);
  })};
}

ResidualReport check_twist_invariance(const ConnPtr& c, const ConnPtr& transported, const SampleConfig& cfg) {
  return {difference(ch_form(transported), ch_form(c), c->cover(), cfg, "twist_invariance")};
}

ResidualReport check_pullback(const ConnPtr& c, const ConnPtr& pulled, const SampleConfig& cfg) {
  const auto map = pulled->gerbe->map;
  if (!map) throw PreconditionError("pullback check: connection is not pulled back");
  return {max_over_torus(pulled->cover(), cfg, "pullback", [&](const EvalPoint& p) {
    return form_residual(ch_total(*pulled, p) - ch_total(*c, cover::apply_map(*map, p)));
  })};
}

EvalPoint locate(const cover::Cover& c, const std::vector<double>& x, int order) {
  std::vector<int> idx(c.dim());
  std::vector<double> y(c.dim());
  for (int a = 0; a < c.dim(); ++a) {
    y[a] = x[a] - std::floor(x[a]);
    idx[a] = std::min(c.grid() - 1, static_cast<int>(std::floor(y[a] * c.grid())));
  }
  return calculus::make_point(c.chart_at(idx), y, order);
}

Complex integrate_cycle(const PointForm& f, const cover::Cover& c, const std::vector<int>& axes,
                        const std::vector<double>& base, int grid) {
  const int k = static_cast<int>(axes.size());
  if (k == 0 || k > c.dim() || grid < 1) throw PreconditionError("integrate_cycle: bad cycle");
  unsigned mask = 0;
  for (int a : axes) mask |= 1u << a;
  long total = 1;
  for (int a = 0; a < k; ++a) total *= grid;
  Complex acc = 0.0;
  std::vector<double> x = base;
  x.resize(c.dim(), 0.0);
  for (long n = 0; n < total; ++n) {
    long rest = n;
    for (int a = 0; a < k; ++a) {
      x[axes[a]] = static_cast<double>(rest % grid) / grid;
      rest /= grid;
    }
    const FormJet v = f(locate(c, x, 0));
    for (const auto& [m, coeff] : v.terms())
      if (std::popcount(m) != k && coeff.max_abs(true) > 0.0) throw PreconditionError("integrate_cycle: degree mismatch");
    if (v.has(mask)) acc += v.coeff(mask).value();
  }
  return acc / static_cast<double>(total);
}

double chern_number(const ConnPtr& c, int grid) {
  const PointForm c1 = [c](const EvalPoint& p) { return ch_m(*c, p, 1); };
  const Complex v = integrate_cycle(c1, c->cover(), {0, 1}, {}, grid);
  return (v / Complex(0.0, 2.0 * std::numbers::pi)).real();
}

}  // namespace gerbecalc::chern
