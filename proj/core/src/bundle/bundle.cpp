#include "gerbecalc/bundle/bundle.hpp"

#include <cmath>
#include <numbers>

#include "gerbecalc/bundle/field.hpp"
#include "gerbecalc/error.hpp"

namespace gerbecalc::bundle {

using calculus::Complex;
using calculus::Rng;
using deligne::GerbeConn;

namespace {

const Complex kI(0.0, 1.0);

JetMatrix identity_at(int n, const EvalPoint& p) { return JetMatrix::identity(n, p.nvars(), p.order); }
FormJet as_form(const JetMatrix& m) { return FormJet::function(m); }

// phi^{-1} G phi + phi^{-1} d phi, with phi given one order above p.
FormJet pull_by(const FormJet& g, const JetMatrix& phi_raised, int order) {
  const FormJet phi = as_form(phi_raised);
  const FormJet inv = as_form(calculus::inverse(phi_raised.truncated(order)));
  return calculus::wedge(inv, calculus::wedge(g, phi)) + calculus::wedge(inv, calculus::exterior_d(phi));
}

std::shared_ptr<const cover::Cover> cover_of(const BundlePtr& e) { return e->gerbe->cover; }

using BaseBuilder = std::function<BundleConn(const GerbePtr&)>;

BundleConn build_on(const GerbePtr& g, const BaseBuilder& base) {
  switch (g->origin) {
    case GerbeConn::Origin::kTrivial:
      return base(g);
    case GerbeConn::Origin::kTwist:
      return transport_twist(build_on(g->parent, base), g->alpha, g);
    case GerbeConn::Origin::kShift:
    case GerbeConn::Origin::kDefect:
      return retag(build_on(g->parent, base), g);
    case GerbeConn::Origin::kPullback:
      return pullback(build_on(g->parent, base), g);
  }
  throw PreconditionError("unknown gerbe origin");
}

void require_same_lambda(const GerbePtr& a, const GerbePtr& b, const char* what) {
  if (a->lambda_id != b->lambda_id) throw PreconditionError(std::string(what) + ": gerbe mismatch");
}

}  // namespace

BundleMorphism BundleMorphism::identity(std::shared_ptr<const cover::Cover> c, int n) {
  BundleMorphism m;
  m.cover = std::move(c);
  m.rank = n;
  m.phi = [n](int, const EvalPoint& p) { return identity_at(n, p); };
  m.id = "id";
  return m;
}

BundleMorphism BundleMorphism::inverse() const {
  BundleMorphism m = *this;
  auto f = phi;
  m.phi = [f](int i, const EvalPoint& p) { return calculus::inverse(f(i, p)); };
  m.id = id + "^-1";
  return m;
}

MorphismPtr compose(const MorphismPtr& a, const MorphismPtr& b) {
  if (a->rank != b->rank) throw PreconditionError("compose: rank mismatch");
  auto m = std::make_shared<BundleMorphism>(*a);
  m->phi = [a, b](int i, const EvalPoint& p) { return a->phi(i, p) * b->phi(i, p); };
  m->id = a->id + "." + b->id;
  return m;
}

MorphismPtr block_sum(const MorphismPtr& a, const MorphismPtr& b) {
  auto m = std::make_shared<BundleMorphism>(*a);
  m->rank = a->rank + b->rank;
  m->phi = [a, b](int i, const EvalPoint& p) { return calculus::block_diag(a->phi(i, p), b->phi(i, p)); };
  m->id = "(" + a->id + "+" + b->id + ")";
  return m;
}

JetMatrix TwistedBundle::g_at(int j, int i, const EvalPoint& p) const {
  if (i == j) return identity_at(rank, p);
  if (i < j) return g({i, j}, p);
  return calculus::inverse(g({j, i}, p));
}

FormJet TwistedConnection::curvature(const EvalPoint& p) const {
  const FormJet gm = gamma(p.chart, p.raised());
  FormJet r = calculus::exterior_d(gm);
  r += calculus::wedge(gm, gm);
  return r;
}

BundleConn make_trivial_bundle(const GerbePtr& g, int rank) {
  if (rank < 0) throw PreconditionError("negative rank");
  auto direct = [rank](const GerbePtr& base) {
    auto e = std::make_shared<TwistedBundle>();
    e->gerbe = base;
    e->rank = rank;
    e->g = [rank](const Simplex&, const EvalPoint& p) { return identity_at(rank, p); };
    e->id = "trivial" + std::to_string(rank);
    e->kind = TwistedBundle::Kind::kTrivial;
    auto c = std::make_shared<TwistedConnection>();
    c->bundle = e;
    c->gerbe = base;
    c->gamma = [rank](int, const EvalPoint& p) { return FormJet(rank, p.nvars(), p.order); };
    c->id = "flat";
    return BundleConn{e, c};
  };
  if (rank == 0) return direct(g);
  return build_on(g, direct);
}

BundleConn make_zero_bundle(const GerbePtr& g) { return make_trivial_bundle(g, 0); }

BundleConn make_line_bundle(const GerbePtr& g, int k) {
  if (g->cover->dim() < 2) throw PreconditionError("line bundle needs a torus of dimension >= 2");
  auto direct = [k](const GerbePtr& base) {
    auto cov = base->cover;
    const double c = 2.0 * std::numbers::pi * k;
    auto e = std::make_shared<TwistedBundle>();
    e->gerbe = base;
    e->rank = 1;
    e->g = [cov, c](const Simplex& s, const EvalPoint& p) {
      const int j = s[1], i = s[0];
      const EvalPoint q = cov->to_chart(p, j);
      const int n = cov->shift(j, i)[1];
      return JetMatrix::scalar(calculus::jet_exp(q.var_jet(0) * Complex(0.0, c * n)), 1);
    };
    e->id = "line" + std::to_string(k);
    e->kind = TwistedBundle::Kind::kLine;
    e->k = k;
    auto conn = std::make_shared<TwistedConnection>();
    conn->bundle = e;
    conn->gerbe = base;
    conn->gamma = [c](int, const EvalPoint& p) {
      FormJet f(1, p.nvars(), p.order);
      const int a = p.axis_of(0);
      if (a >= 0) f.add_term(1u << a, JetMatrix::scalar(p.var_jet(1) * Complex(0.0, -c), 1));
      return f;
    };
    conn->id = "standard";
    return BundleConn{e, conn};
  };
  return build_on(g, direct);
}

BundlePtr direct_sum(const BundlePtr& e, const BundlePtr& f) {
  require_same_lambda(e->gerbe, f->gerbe, "direct_sum");
  auto r = std::make_shared<TwistedBundle>();
  r->gerbe = e->gerbe;
  r->rank = e->rank + f->rank;
  r->g = [e, f](const Simplex& s, const EvalPoint& p) { return calculus::block_diag(e->g(s, p), f->g(s, p)); };
  r->id = "(" + e->id + "+" + f->id + ")";
  r->kind = TwistedBundle::Kind::kSum;
  r->inner = e;
  r->second = f;
  return r;
}

ConnPtr direct_sum_conn(const ConnPtr& a, const ConnPtr& b) {
  require_same_lambda(a->gerbe, b->gerbe, "direct_sum_conn");
  auto c = std::make_shared<TwistedConnection>();
  c->bundle = direct_sum(a->bundle, b->bundle);
  c->gerbe = a->gerbe;
  c->gamma = [a, b](int i, const EvalPoint& p) { return calculus::block_diag(a->gamma(i, p), b->gamma(i, p)); };
  c->id = "(" + a->id + "+" + b->id + ")";
  c->parametric = a->parametric || b->parametric;
  return c;
}

BundleConn direct_sum(const BundleConn& a, const BundleConn& b) {
  ConnPtr c = direct_sum_conn(a.conn, b.conn);
  return {c->bundle, c};
}

BundlePtr apply_morphism(const BundlePtr& e, const MorphismPtr& phi) {
  if (phi->rank != e->rank) throw PreconditionError("apply_morphism: rank mismatch");
  auto r = std::make_shared<TwistedBundle>();
  r->gerbe = e->gerbe;
  r->rank = e->rank;
  r->g = [e, phi](const Simplex& s, const EvalPoint& p) {
    return phi->at(s[1], p) * e->g(s, p) * calculus::inverse(phi->at(s[0], p));
  };
  r->id = phi->id + "." + e->id;
  r->kind = TwistedBundle::Kind::kGauge;
  r->inner = e;
  r->phi = phi;
  return r;
}

ConnPtr gauge_transform(const ConnPtr& gamma_f, const MorphismPtr& phi, const BundlePtr& e) {
  if (phi->rank != gamma_f->rank() || e->rank != phi->rank) throw PreconditionError("gauge_transform: rank mismatch");
  auto c = std::make_shared<TwistedConnection>();
  c->bundle = e;
  c->gerbe = gamma_f->gerbe;
  c->gamma = [gamma_f, phi](int i, const EvalPoint& p) {
    return pull_by(gamma_f->gamma(i, p), phi->phi(i, p.raised()), p.order);
  };
  c->id = phi->id + "*" + gamma_f->id;
  c->parametric = gamma_f->parametric;
  return c;
}

BundleConn gauge_bundle(const BundleConn& e, std::uint64_t seed) {
  auto cov = cover_of(e.bundle);
  const int n = e.bundle->rank;
  Rng root(Rng::derive_seed("gauge", seed));
  auto us = std::make_shared<std::vector<calculus::ExprMatrix>>();
  for (int i = 0; i < cov->chart_count(); ++i) {
    Rng r = root.split("chart:" + std::to_string(i));
    us->push_back(random_unitary(r, n, cov->dim(), 0.4));
  }
  auto phi = std::make_shared<BundleMorphism>();
  phi->cover = cov;
  phi->rank = n;
  phi->phi = [us](int i, const EvalPoint& p) { return (*us)[i].eval(p); };
  phi->id = "psi" + std::to_string(seed);
  BundlePtr f = apply_morphism(e.bundle, phi);
  auto inv = std::make_shared<BundleMorphism>(phi->inverse());
  ConnPtr c = gauge_transform(e.conn, inv, f);
  return {f, c};
}

MorphismPtr random_automorphism(const BundlePtr& e, std::uint64_t seed, double amp) {
  auto cov = cover_of(e);
  const int n = e->rank;
  Rng rng(Rng::derive_seed("automorphism", seed));
  auto m = std::make_shared<BundleMorphism>();
  m->cover = cov;
  m->rank = n;
  m->id = "aut" + std::to_string(seed);
  if (n == 0) {
    m->phi = [](int, const EvalPoint& p) { return identity_at(0, p); };
    return m;
  }
  using Kind = TwistedBundle::Kind;
  switch (e->kind) {
    case Kind::kTrivial:
    case Kind::kLine: {
      auto u = random_unitary(rng, n, cov->dim(), amp);
      m->phi = [u](int, const EvalPoint& p) { return u.eval(p); };
      return m;
    }
    case Kind::kSum: {
      auto r = block_sum(random_automorphism(e->inner, rng.split("a").seed(), amp),
                         random_automorphism(e->second, rng.split("b").seed(), amp));
      m->phi = r->phi;
      return m;
    }
    case Kind::kGauge: {
      auto in = random_automorphism(e->inner, rng.split("in").seed(), amp);
      auto psi = e->phi;
      m->phi = [in, psi](int i, const EvalPoint& p) {
        const JetMatrix ps = psi->phi(i, p);
        return ps * in->phi(i, p) * calculus::inverse(ps);
      };
      return m;
    }
    case Kind::kTransport:
    case Kind::kRetag: {
      auto in = random_automorphism(e->inner, rng.split("in").seed(), amp);
      m->phi = in->phi;
      return m;
    }
    case Kind::kPullback: {
      auto in = random_automorphism(e->inner, rng.split("in").seed(), amp);
      auto map = e->map;
      m->phi = [in, map](int r, const EvalPoint& p) { return in->phi(map->chart[r], cover::apply_map(*map, p)); };
      return m;
    }
  }
  throw PreconditionError("unknown bundle kind");
}

ChartFormFn random_end_form(const BundlePtr& e, std::uint64_t seed, double amp) {
  auto cov = cover_of(e);
  const int n = e->rank;
  Rng rng(Rng::derive_seed("end-form", seed));
  if (n == 0) return [](int, const EvalPoint& p) { return FormJet(0, p.nvars(), p.order); };
  using Kind = TwistedBundle::Kind;
  switch (e->kind) {
    case Kind::kTrivial:
    case Kind::kLine: {
      auto f = random_antihermitian_1form(rng, n, cov->dim(), amp);
      return [f](int, const EvalPoint& p) { return f.eval(p); };
    }
    case Kind::kSum: {
      auto a = random_end_form(e->inner, rng.split("a").seed(), amp);
      auto b = random_end_form(e->second, rng.split("b").seed(), amp);
      return [a, b](int i, const EvalPoint& p) { return calculus::block_diag(a(i, p), b(i, p)); };
    }
    case Kind::kGauge: {
      auto in = random_end_form(e->inner, rng.split("in").seed(), amp);
      auto psi = e->phi;
      return [in, psi](int i, const EvalPoint& p) {
        const JetMatrix ps = psi->phi(i, p);
        return calculus::wedge(as_form(ps), calculus::wedge(in(i, p), as_form(calculus::inverse(ps))));
      };
    }
    case Kind::kTransport:
    case Kind::kRetag:
      return random_end_form(e->inner, rng.split("in").seed(), amp);
    case Kind::kPullback: {
      auto in = random_end_form(e->inner, rng.split("in").seed(), amp);
      auto map = e->map;
      return [in, map](int r, const EvalPoint& p) { return in(map->chart[r], cover::apply_map(*map, p)); };
    }
  }
  throw PreconditionError("unknown bundle kind");
}

BundlePtr transport_bundle(const BundlePtr& e, std::shared_ptr<const deligne::DeligneOne> alpha,
                           const GerbePtr& target) {
  if (target->lambda_id != e->gerbe->lambda_id + "*" + alpha->id)
    throw PreconditionError("transport: target gerbe is not the twist of the source by alpha");
  auto r = std::make_shared<TwistedBundle>();
  r->gerbe = target;
  r->rank = e->rank;
  r->g = [e, alpha](const Simplex& s, const EvalPoint& p) {
    JetMatrix m = e->g(s, p);
    m *= alpha->chi(s, p);
    return m;
  };
  r->id = "T[" + alpha->id + "]" + e->id;
  r->kind = TwistedBundle::Kind::kTransport;
  r->inner = e;
  r->alpha = std::move(alpha);
  return r;
}

ConnPtr transport_conn(const ConnPtr& c, const BundlePtr& target_bundle) {
  if (target_bundle->kind != TwistedBundle::Kind::kTransport || target_bundle->inner->id != c->bundle->id)
    throw PreconditionError("transport: bundle is not the transport of the connection's bundle");
  auto alpha = target_bundle->alpha;
  auto r = std::make_shared<TwistedConnection>();
  r->bundle = target_bundle;
  r->gerbe = target_bundle->gerbe;
  const int n = c->rank();
  r->gamma = [c, alpha, n](int i, const EvalPoint& p) {
    return c->gamma(i, p) + calculus::wedge(alpha->pi({i}, p), FormJet::identity(n, p.nvars(), p.order));
  };
  r->id = "T[" + alpha->id + "]" + c->id;
  r->parametric = c->parametric;
  return r;
}

BundleConn transport_twist(const BundleConn& e, std::shared_ptr<const deligne::DeligneOne> alpha,
                           const GerbePtr& target) {
  BundlePtr b = transport_bundle(e.bundle, std::move(alpha), target);
  return {b, transport_conn(e.conn, b)};
}

BundlePtr retag_bundle(const BundlePtr& e, const GerbePtr& target) {
  require_same_lambda(e->gerbe, target, "retag");
  auto r = std::make_shared<TwistedBundle>(*e);
  r->gerbe = target;
  r->kind = TwistedBundle::Kind::kRetag;
  r->inner = e;
  r->id = "R" + e->id;
  return r;
}

ConnPtr retag_conn(const ConnPtr& c, const BundlePtr& target_bundle) {
  require_same_lambda(c->gerbe, target_bundle->gerbe, "retag");
  auto r = std::make_shared<TwistedConnection>(*c);
  r->bundle = target_bundle;
  r->gerbe = target_bundle->gerbe;
  return r;
}

BundleConn retag(const BundleConn& e, const GerbePtr& target) {
  BundlePtr b = retag_bundle(e.bundle, target);
  return {b, retag_conn(e.conn, b)};
}

BundlePtr pullback_bundle(const BundlePtr& e, const GerbePtr& target) {
  if (target->origin != GerbeConn::Origin::kPullback || target->parent->lambda_id != e->gerbe->lambda_id)
    throw PreconditionError("pullback: target gerbe is not a pullback of the bundle's gerbe");
  auto map = target->map;
  auto r = std::make_shared<TwistedBundle>();
  r->gerbe = target;
  r->rank = e->rank;
  r->g = [e, map](const Simplex& s, const EvalPoint& p) {
    return e->g_at(map->chart[s[1]], map->chart[s[0]], cover::apply_map(*map, p));
  };
  r->id = "P" + e->id;
  r->kind = TwistedBundle::Kind::kPullback;
  r->inner = e;
  r->map = map;
  return r;
}

ConnPtr pullback_conn(const ConnPtr& c, const BundlePtr& target_bundle) {
  auto map = target_bundle->map;
  if (!map) throw PreconditionError("pullback: bundle carries no chart map");
  auto r = std::make_shared<TwistedConnection>();
  r->bundle = target_bundle;
  r->gerbe = target_bundle->gerbe;
  r->gamma = [c, map](int i, const EvalPoint& p) { return c->gamma(map->chart[i], cover::apply_map(*map, p)); };
  r->id = "P" + c->id;
  r->parametric = c->parametric;
  return r;
}

BundleConn pullback(const BundleConn& e, const GerbePtr& target) {
  BundlePtr b = pullback_bundle(e.bundle, target);
  return {b, pullback_conn(e.conn, b)};
}

ConnPtr add_end_form(const ConnPtr& c, const ChartFormFn& eta, const std::string& id) {
  auto r = std::make_shared<TwistedConnection>(*c);
  r->gamma = [c, eta](int i, const EvalPoint& p) { return c->gamma(i, p) + eta(i, p); };
  r->id = c->id + "+" + id;
  return r;
}

ConnPtr perturb_connection(const ConnPtr& c, std::uint64_t seed, double amp) {
  return add_end_form(c, random_end_form(c->bundle, seed, amp), "eta" + std::to_string(seed));
}

}  // namespace gerbecalc::bundle
