#include "gerbecalc/deligne/gerbe.hpp"

#include <algorithm>
#include <cmath>

#include "gerbecalc/deligne/cochain.hpp"
#include "gerbecalc/error.hpp"

namespace gerbecalc::deligne {

using calculus::Complex;
using calculus::JetMatrix;
using calculus::MatrixForm;
using calculus::Rng;
using calculus::ScalarExpr;

namespace {

const Complex kI(0.0, 1.0);

// Sorts `v` in place; returns the permutation sign, or 0 on a repeated index.
int sort_with_sign(std::vector<int>& v) {
  int sign = 1;
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = a + 1; b < v.size(); ++b) {
      if (v[a] == v[b]) return 0;
      if (v[a] > v[b]) sign = -sign;
    }
  std::sort(v.begin(), v.end());
  return sign;
}

FormJet zero_form(const EvalPoint& p) { return FormJet(1, p.nvars(), p.order); }

// lambda^{-1} d lambda for a jet of one order higher than the result.
FormJet dlog(const Jet& f_raised) {
  FormJet df = calculus::exterior_d(FormJet::scalar(f_raised));
  const Jet inv = f_raised.truncated(f_raised.order() - 1).reciprocal();
  return calculus::wedge(FormJet::scalar(inv), df);
}


}  // namespace

GlobalFormFn global_form(const MatrixForm& f) {
  return [f](const EvalPoint& p) { return f.eval(p); };
}

double form_residual(const FormJet& f) { return f.max_abs(true); }

EvalPoint sample_eval_point(const cover::Simplex& s, const cover::SamplePoint& sp, int k, int order) {
  return calculus::make_point(s[k], sp.coords[k], order);
}

Jet DeligneOne::chi_at(int j, int i, const EvalPoint& p) const {
  if (i == j) return p.constant(1.0);
  if (i < j) return chi({i, j}, p);
  return chi({j, i}, p).reciprocal();
}

FormJet DeligneOne::pi_at(int i, const EvalPoint& p) const { return pi({i}, cover->to_chart(p, i)); }

DeligneOne DeligneOne::identity(std::shared_ptr<const cover::Cover> c) {
  DeligneOne a;
  a.cover = std::move(c);
  a.chi = [](const Simplex&, const EvalPoint& p) { return p.constant(1.0); };
  a.pi = [](const Simplex&, const EvalPoint& p) { return zero_form(p); };
  a.id = "identity";
  return a;
}

DeligneOne DeligneOne::random(std::shared_ptr<const cover::Cover> c, std::uint64_t seed, double amp) {
  const int d = c->dim();
  Rng root(Rng::derive_seed("deligne-one", seed));
  auto chis = std::make_shared<std::vector<ScalarExpr>>();
  for (std::size_t e = 0; e < c->simplices(1).size(); ++e) {
    Rng r = root.split("chi:" + std::to_string(e));
    chis->push_back(exp(ScalarExpr(kI) * calculus::random_trig(r, d, amp)));
  }
  auto pis = std::make_shared<std::vector<MatrixForm>>();
  for (int i = 0; i < c->chart_count(); ++i) {
    Rng r = root.split("pi:" + std::to_string(i));
    MatrixForm f(1);
    for (int k = 0; k < d; ++k)
      f.add_term({k}, calculus::ExprMatrix::scalar(ScalarExpr(kI) * calculus::random_trig(r, d, amp)));
    pis->push_back(std::move(f));
  }
  DeligneOne a;
  a.cover = c;
  a.chi = [c, chis](const Simplex& s, const EvalPoint& p) { return (*chis)[c->simplex_index(s)].eval(p); };
  a.pi = [pis](const Simplex& s, const EvalPoint& p) { return (*pis)[s[0]].eval(p); };
  a.id = "random:" + std::to_string(seed);
  return a;
}

DeligneOne DeligneOne::inverse() const {
  DeligneOne a;
  a.cover = cover;
  auto chi0 = chi;
  auto pi0 = pi;
  a.chi = [chi0](const Simplex& s, const EvalPoint& p) { return chi0(s, p).reciprocal(); };
  a.pi = [pi0](const Simplex& s, const EvalPoint& p) { return -pi0(s, p); };
  a.id = id + "^-1";
  return a;
}

Jet GerbeConn::lambda_at(int k, int j, int i, const EvalPoint& p) const {
  std::vector<int> v{i, j, k};
  const int sign = sort_with_sign(v);
  if (sign == 0) return p.constant(1.0);
  const Jet l = lambda(v, p);
  return sign > 0 ? l : l.reciprocal();
}

FormJet GerbeConn::A_at(int j, int i, const EvalPoint& p) const {
  if (i == j) return zero_form(p);
  if (i < j) return A({i, j}, p);
  return -A({j, i}, p);
}

FormJet GerbeConn::B_at(const EvalPoint& p) const { return B({p.chart}, p); }

FormJet GerbeConn::H_at(const EvalPoint& p) const { return calculus::exterior_d(B_at(p.raised())); }

GerbePtr make_trivial_gerbe(std::shared_ptr<const cover::Cover> c) {
  auto g = std::make_shared<GerbeConn>();
  g->cover = std::move(c);
  g->lambda = [](const Simplex&, const EvalPoint& p) { return p.constant(1.0); };
  g->A = [](const Simplex&, const EvalPoint& p) { return zero_form(p); };
  g->B = [](const Simplex&, const EvalPoint& p) { return zero_form(p); };
  g->lambda_id = "trivial";
  g->origin = GerbeConn::Origin::kTrivial;
  return g;
}

GerbePtr apply_twist_morphism(const GerbePtr& g, std::shared_ptr<const DeligneOne> a) {
  auto r = std::make_shared<GerbeConn>();
  r->cover = g->cover;
  r->lambda = [g, a](const Simplex& s, const EvalPoint& p) { return g->lambda(s, p) * delta_chi(*a, s, p); };
  r->A = [g, a](const Simplex& s, const EvalPoint& p) {
    FormJet out = g->A(s, p);
    out += dlog(a->chi_at(s[1], s[0], p.raised()));
    out += a->pi_at(s[1], p);
    out -= a->pi_at(s[0], p);
    return out;
  };
  r->B = [g, a](const Simplex& s, const EvalPoint& p) {
    FormJet out = g->B(s, p);
    out += calculus::exterior_d(a->pi(s, p.raised()));
    return out;
  };
  r->lambda_id = g->lambda_id + "*" + a->id;
  r->origin = GerbeConn::Origin::kTwist;
  r->parent = g;
  r->alpha = std::move(a);
  return r;
}

GerbePtr shift_by_xi(const GerbePtr& g, const MatrixForm& xi) {
  if (xi.size() != 1) throw PreconditionError("shift_by_xi: scalar 2-form required");
  auto r = std::make_shared<GerbeConn>();
  r->cover = g->cover;
  r->lambda = g->lambda;
  r->A = g->A;
  r->B = [g, xi](const Simplex& s, const EvalPoint& p) {
    FormJet out = g->B(s, p);
    out += xi.eval(p);
    return out;
  };
  r->lambda_id = g->lambda_id;
  r->origin = GerbeConn::Origin::kShift;
  r->parent = g;
  r->xi = xi;
  return r;
}

GerbePtr make_coboundary_gerbe(std::shared_ptr<const cover::Cover> c, std::uint64_t seed, const MatrixForm& beta) {
  auto a = std::make_shared<DeligneOne>(DeligneOne::random(c, seed));
  return shift_by_xi(apply_twist_morphism(make_trivial_gerbe(c), a), beta);
}

GerbePtr pullback_gerbe(const GerbePtr& g, std::shared_ptr<const cover::Cover> fine,
                        std::shared_ptr<const cover::CoverMap> map) {
  auto r = std::make_shared<GerbeConn>();
  r->cover = std::move(fine);
  r->lambda = [g, map](const Simplex& s, const EvalPoint& p) {
    const auto& t = map->chart;
    return g->lambda_at(t[s[2]], t[s[1]], t[s[0]], cover::apply_map(*map, p));
  };
  r->A = [g, map](const Simplex& s, const EvalPoint& p) {
    return g->A_at(map->chart[s[1]], map->chart[s[0]], cover::apply_map(*map, p));
  };
  r->B = [g, map](const Simplex&, const EvalPoint& p) { return g->B_at(cover::apply_map(*map, p)); };
  r->lambda_id = "pull(" + g->lambda_id + ")@" + std::to_string(reinterpret_cast<std::uintptr_t>(map.get()));
  r->origin = GerbeConn::Origin::kPullback;
  r->parent = g;
  r->map = std::move(map);
  return r;
}

GerbePtr perturb_B(const GerbePtr& g, int chart, const MatrixForm& form) {
  auto r = std::make_shared<GerbeConn>(*g);
  r->B = [g, chart, form](const Simplex& s, const EvalPoint& p) {
    FormJet out = g->B(s, p);
    if (s[0] == chart) out += form.eval(p);
    return out;
  };
  r->origin = GerbeConn::Origin::kDefect;
  r->parent = g;
  return r;
}

GerbePtr conjugate_lambda(const GerbePtr& g) {
  auto r = std::make_shared<GerbeConn>(*g);
  r->lambda = [g](const Simplex& s, const EvalPoint& p) { return g->lambda(s, p).conj(); };
  r->origin = GerbeConn::Origin::kDefect;
  r->parent = g;
  return r;
}

ResidualReport validate_gerbe(const GerbeConn& g, const SampleConfig& cfg) {
  const cover::Cover& c = *g.cover;
  Residual norm{"normalization"}, unit{"unit_modulus"}, c1{"C1"}, c2{"C2"}, c3{"C3"};
  const auto& e1 = c.simplices(1);
  for (const Simplex& s : e1) {
    const int i = s[0], j = s[1];
    for (const auto& sp : c.sample_points(s, cfg.per_simplex(e1.size()), cfg.seed)) {
      const EvalPoint p = sample_eval_point(s, sp, 0, 1);
      FormJet r = g.B_at(c.to_chart(p, j));
      r -= g.B_at(p);
      r -= calculus::exterior_d(g.A_at(j, i, p));
      c3.add(form_residual(r));
      norm.add(form_residual(g.A_at(j, i, p) + g.A_at(i, j, p)));
    }
  }
  const auto& e2 = c.simplices(2);
  for (const Simplex& s : e2) {
    const int i = s[0], j = s[1], k = s[2];
    for (const auto& sp : c.sample_points(s, cfg.per_simplex(e2.size()), cfg.seed)) {
      const EvalPoint p = sample_eval_point(s, sp, 0, 0);
      const Jet l = g.lambda_at(k, j, i, p.raised());
      unit.add(std::abs(std::abs(l.value()) - 1.0));
      FormJet r = dlog(l);
      r -= g.A_at(j, i, p);
      r -= g.A_at(i, k, p);
      r -= g.A_at(k, j, p);
      c2.add(form_residual(r));
      const Complex swapped = g.lambda_at(j, k, i, p).value() * l.value();
      const Complex repeated = g.lambda_at(k, k, i, p).value();
      norm.add(std::max(std::abs(swapped - 1.0), std::abs(repeated - 1.0)));
    }
  }
  const auto& e3 = c.simplices(3);
  for (const Simplex& s : e3) {
    const int i = s[0], j = s[1], k = s[2], l = s[3];
    for (const auto& sp : c.sample_points(s, cfg.per_simplex(e3.size()), cfg.seed)) {
      const EvalPoint p = sample_eval_point(s, sp, 0, 0);
      const Complex v = g.lambda_at(k, j, i, p).value() / g.lambda_at(l, j, i, p).value() *
                        g.lambda_at(l, k, i, p).value() / g.lambda_at(l, k, j, p).value();
      c1.add(std::abs(v - 1.0));
    }
  }
  return {norm, unit, c1, c2, c3};
}

ResidualReport check_curvature_H(const GerbeConn& g, const SampleConfig& cfg) {
  const cover::Cover& c = *g.cover;
  Residual glue{"H_glue"}, closed{"dH"};
  const auto& e1 = c.simplices(1);
  for (const Simplex& s : e1) {
    for (const auto& sp : c.sample_points(s, cfg.per_simplex(e1.size()), cfg.seed)) {
      const EvalPoint p = sample_eval_point(s, sp, 0, 0);
      glue.add(form_residual(g.H_at(p) - g.H_at(c.to_chart(p, s[1]))));
    }
  }
  const auto& e0 = c.simplices(0);
  for (const Simplex& s : e0) {
    for (const auto& sp : c.sample_points(s, cfg.per_simplex(e0.size()), cfg.seed)) {
      const EvalPoint p = sample_eval_point(s, sp, 0, 0);
      closed.add(form_residual(calculus::exterior_d(g.H_at(p.raised()))));
    }
  }
  return {glue, closed};
}

}  // namespace gerbecalc::deligne
