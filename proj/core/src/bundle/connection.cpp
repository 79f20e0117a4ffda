#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

#include "gerbecalc/bundle/bundle.hpp"
#include "gerbecalc/error.hpp"

namespace gerbecalc::bundle {

using calculus::Complex;
using calculus::kVarS;
using calculus::kVarT;

namespace {

FormJet as_form(const JetMatrix& m) { return FormJet::function(m); }

void require_compatible(const ConnPtr& a, const ConnPtr& b, const char* what) {
  if (a->rank() != b->rank() || a->bundle->id != b->bundle->id)
    throw PreconditionError(std::string(what) + ": connections live on different bundles");
  if (a->gerbe->lambda_id != b->gerbe->lambda_id) throw PreconditionError(std::string(what) + ": gerbe mismatch");
}

std::shared_ptr<TwistedConnection> derived(const ConnPtr& base, ChartFormFn gamma, std::string id) {
  auto r = std::make_shared<TwistedConnection>(*base);
  r->gamma = std::move(gamma);
  r->id = std::move(id);
  return r;
}

// Values of a connection that does not read t or s. Along a fiber integral the
// same spatial point is requested at every node, so the last few results are
// kept.
class SpatialMemo {
 public:
  explicit SpatialMemo(ChartFormFn f) : f_(std::move(f)) {}

  FormJet operator()(int i, const EvalPoint& p) {
    {
      std::lock_guard lock(mu_);
      for (const Entry& e : entries_)
        if (e.valid && matches(e, i, p)) return e.value;
    }
    FormJet v = f_(i, p);
    std::lock_guard lock(mu_);
    Entry& e = entries_[next_];
    next_ = (next_ + 1) % entries_.size();
    e = Entry{true, i, p, v};
    return v;
  }

 private:
  struct Entry {
    bool valid = false;
    int i = 0;
    EvalPoint p;
    FormJet value;
  };

  static bool matches(const Entry& e, int i, const EvalPoint& p) {
    if (e.i != i || e.p.chart != p.chart || e.p.order != p.order || e.p.axes != p.axes) return false;
    for (int v = 0; v < calculus::kVarCount; ++v)
      if (v != kVarT && v != kVarS && e.p.values[v] != p.values[v]) return false;
    return true;
  }

  ChartFormFn f_;
  std::mutex mu_;
  std::array<Entry, 4> entries_;
  std::size_t next_ = 0;
};

ChartFormFn memo(ChartFormFn f) {
  auto m = std::make_shared<SpatialMemo>(std::move(f));
  return [m](int i, const EvalPoint& p) { return (*m)(i, p); };
}

ChartFormFn endpoint(const ConnPtr& g) { return g->parametric ? g->gamma : memo(g->gamma); }

ConnPtr parametric(std::shared_ptr<TwistedConnection> c) {
  c->parametric = true;
  return c;
}

Jet sin_pi(const Jet& t) { return calculus::jet_sin(t * std::numbers::pi); }

}  // namespace

double matrix_residual(const JetMatrix& m) {
  double s = 0;
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) s += std::norm(m(i, j).value());
  return std::sqrt(s);
}

ConnPtr affine_path(const ConnPtr& g0, const ConnPtr& g1) {
  require_compatible(g0, g1, "affine_path");
  return parametric(derived(g0, [f0 = endpoint(g0), f1 = endpoint(g1)](int i, const EvalPoint& p) {
    const FormJet a = f0(i, p);
    return a + calculus::scale(p.var_jet(kVarT), f1(i, p) - a);
  }, "affine(" + g0->id + "," + g1->id + ")"));
}

ConnPtr eased_path(const ConnPtr& g0, const ConnPtr& g1) {
  require_compatible(g0, g1, "eased_path");
  return parametric(derived(g0, [f0 = endpoint(g0), f1 = endpoint(g1)](int i, const EvalPoint& p) {
    const Jet t = p.var_jet(kVarT);
    const Jet e = (p.constant(1.0) - calculus::jet_cos(t * std::numbers::pi)) * 0.5;
    const FormJet a = f0(i, p);
    return a + calculus::scale(e, f1(i, p) - a);
  }, "eased(" + g0->id + "," + g1->id + ")"));
}

ConnPtr detour_path(const ConnPtr& g0, const ConnPtr& g1, std::uint64_t seed, double amp) {
  require_compatible(g0, g1, "detour_path");
  ChartFormFn eta = memo(random_end_form(g0->bundle, seed, amp));
  return parametric(derived(g0, [f0 = endpoint(g0), f1 = endpoint(g1), eta](int i, const EvalPoint& p) {
    const Jet t = p.var_jet(kVarT);
    const FormJet a = f0(i, p);
    return a + calculus::scale(t, f1(i, p) - a) + calculus::scale(sin_pi(t), eta(i, p));
  }, "detour(" + g0->id + "," + g1->id + ")"));
}

ConnPtr gauge_path(const ConnPtr& g, const MorphismPtr& phi) {
  return affine_path(g, gauge_transform(g, phi, g->bundle));
}

ConnPtr bigon_family(const ConnPtr& alpha, const ConnPtr& gamma) {
  require_compatible(alpha, gamma, "bigon");
  return parametric(derived(alpha, [fa = endpoint(alpha), fg = endpoint(gamma)](int i, const EvalPoint& p) {
    const FormJet a = fa(i, p);
    return a + calculus::scale(p.var_jet(kVarS), fg(i, p) - a);
  }, "bigon(" + alpha->id + "," + gamma->id + ")"));
}

ConnPtr triangle_family(const ConnPtr& g1, const ConnPtr& g2, const ConnPtr& g3) {
  require_compatible(g1, g2, "triangle");
  require_compatible(g2, g3, "triangle");
  return parametric(
      derived(g1, [f1 = endpoint(g1), f2 = endpoint(g2), f3 = endpoint(g3)](int i, const EvalPoint& p) {
        const Jet t = p.var_jet(kVarT);
        const FormJet a = f1(i, p), b = f2(i, p);
        return a + calculus::scale(t, b - a) + calculus::scale(t * p.var_jet(kVarS), f3(i, p) - b);
      }, "triangle(" + g1->id + "," + g2->id + "," + g3->id + ")"));
}

ConnPtr gauge_path_pullback(const ConnPtr& path, const MorphismPtr& phi) {
  return gauge_transform(path, phi, path->bundle);
}

ConnPtr path_at(const ConnPtr& path, double t, double s) {
  auto r = derived(path, [path, t, s](int i, const EvalPoint& p) {
    return path->gamma(i, p.with_value(kVarT, t).with_value(kVarS, s));
  }, path->id + "@" + std::to_string(t));
  r->parametric = false;
  return r;
}

ResidualReport validate_bundle(const TwistedBundle& e, const SampleConfig& cfg) {
  const cover::Cover& c = e.cover();
  const int n = e.rank;
  Residual unit{"unitarity"}, norm{"normalization"}, cocycle{"cocycle"};
  const auto& e1 = c.simplices(1);
  for (const Simplex& s : e1) {
    for (const auto& sp : c.sample_points(s, cfg.per_simplex(e1.size()), cfg.seed)) {
      const EvalPoint p = deligne::sample_eval_point(s, sp, 0, 0);
      const JetMatrix g = e.g_at(s[1], s[0], p);
      unit.add(matrix_residual(g * g.adjoint() - JetMatrix::identity(n, p.nvars(), 0)));
      norm.add(matrix_residual(e.g_at(s[0], s[1], p) * g - JetMatrix::identity(n, p.nvars(), 0)));
    }
  }
  const auto& e2 = c.simplices(2);
  for (const Simplex& s : e2) {
    const int i = s[0], j = s[1], k = s[2];
    for (const auto& sp : c.sample_points(s, cfg.per_simplex(e2.size()), cfg.seed)) {
      const EvalPoint p = deligne::sample_eval_point(s, sp, 0, 0);
      JetMatrix rhs = e.g_at(k, i, p);
      rhs *= e.gerbe->lambda_at(k, j, i, p);
      cocycle.add(matrix_residual(e.g_at(k, j, p) * e.g_at(j, i, p) - rhs));
    }
  }
  return {unit, norm, cocycle};
}

ResidualReport validate_connection(const TwistedConnection& c, const SampleConfig& cfg,
                                   const std::vector<double>& ts, const std::vector<double>& ss) {
  const cover::Cover& cov = c.cover();
  const TwistedBundle& e = *c.bundle;
  const int n = e.rank;
  Residual antiherm{"anti_hermitian"}, compat{"compatibility"}, glue{"curvature_glue"};
  auto params = [&](const EvalPoint& p, auto&& body) {
    for (double t : ts)
      for (double s : ss) body(p.with_value(kVarT, t).with_value(kVarS, s));
  };
  const auto& e0 = cov.simplices(0);
  for (const Simplex& s : e0)
    for (const auto& sp : cov.sample_points(s, cfg.per_simplex(e0.size()), cfg.seed))
      params(deligne::sample_eval_point(s, sp, 0, 0), [&](const EvalPoint& p) {
        const FormJet g = c.at(p);
        antiherm.add(deligne::form_residual(g + g.adjoint()));
      });
  const auto& e1 = cov.simplices(1);
  for (const Simplex& s : e1) {
    const int i = s[0], j = s[1];
    for (const auto& sp : cov.sample_points(s, cfg.per_simplex(e1.size()), cfg.seed))
      params(deligne::sample_eval_point(s, sp, 0, 0), [&](const EvalPoint& p) {
        const JetMatrix g1 = e.g_at(j, i, p.raised());
        const FormJet g = as_form(g1.truncated(0));
        const FormJet ginv = as_form(calculus::inverse(g1.truncated(0)));
        const FormJet one = FormJet::identity(n, p.nvars(), p.order);
        FormJet r = c.at(p);
        r -= calculus::wedge(ginv, calculus::wedge(c.gamma_at(j, p), g));
        r -= calculus::wedge(ginv, calculus::exterior_d(as_form(g1)));
        r += calculus::wedge(c.gerbe->A_at(j, i, p), one);
        compat.add(deligne::form_residual(r));

        FormJet q = c.curvature(p);
        q -= calculus::wedge(ginv, calculus::wedge(c.curvature(cov.to_chart(p, j)), g));
        q += calculus::wedge(calculus::exterior_d(c.gerbe->A_at(j, i, p.raised())), one);
        glue.add(deligne::form_residual(q));
      });
  }
  return {antiherm, compat, glue};
}

ResidualReport validate_morphism(const BundleMorphism& phi, const TwistedBundle& e, const TwistedBundle& f,
                                 const SampleConfig& cfg) {
  const cover::Cover& c = e.cover();
  Residual r{"intertwining"};
  const auto& e1 = c.simplices(1);
  for (const Simplex& s : e1) {
    const int i = s[0], j = s[1];
    for (const auto& sp : c.sample_points(s, cfg.per_simplex(e1.size()), cfg.seed)) {
      const EvalPoint p = deligne::sample_eval_point(s, sp, 0, 0);
      r.add(matrix_residual(phi.at(j, p) * e.g_at(j, i, p) - f.g_at(j, i, p) * phi.at(i, p)));
    }
  }
  return {r};
}

}  // namespace gerbecalc::bundle
