#include "gerbecalc/cli/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

#include "gerbecalc/calculus/matrix_form.hpp"
#include "gerbecalc/calculus/random.hpp"
#include "gerbecalc/chern/chern.hpp"
#include "gerbecalc/error.hpp"
#include "gerbecalc/ktheory/ktheory.hpp"
#include "gerbecalc/nerve/nerve.hpp"

namespace gerbecalc::cli {

namespace {

using bundle::BundleConn;
using bundle::ConnPtr;
using calculus::MatrixForm;
using deligne::GerbePtr;
using TwistPtr = std::shared_ptr<const deligne::DeligneOne>;

struct Outcome {
  double max = 0.0;
  long points = 0;
  bool pass = true;
  std::string message;

  void absorb(const ResidualReport& r, double tol) {
    for (const auto& x : r) {
      max = std::max(max, x.max);
      points += x.points;
      if (!(x.max <= tol)) {
        pass = false;
        if (message.empty()) message = x.name + " exceeds tolerance";
      }
    }
  }
  void fail(const std::string& why) {
    pass = false;
    if (message.empty()) message = why;
  }
};

long long as_int(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw PreconditionError("bad integer for " + what + ": '" + s + "'");
  return v;
}

double as_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw PreconditionError("bad number for " + what + ": '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep))
    if (!part.empty()) out.push_back(part);
  return out;
}

class Context {
 public:
  Context(const Manifest& m, const RunOptions& opt) : m_(m), opt_(opt) {
    const int grid = opt.grid_override ? *opt.grid_override : m.grid;
    cover_ = std::make_shared<const cover::Cover>(cover::Cover::torus(m.dim, grid, m.margin));
    cfg_.per_class = m.samples;
    cfg_.seed = m.seed;
  }

  const SampleConfig& cfg() const { return cfg_; }
  const Tolerances& tol() const { return m_.tol; }
  int nodes() const { return opt_.quad_nodes; }
  const std::shared_ptr<const cover::Cover>& cover() const { return cover_; }

  // Sub-seed of a declared seed, keyed by the object name.
  std::uint64_t seed(const std::string& name, const std::string& declared) const {
    return calculus::Rng::derive_seed(name + ":" + declared, m_.seed);
  }

  GerbePtr gerbe(const std::string& id) {
    if (auto it = gerbes_.find(id); it != gerbes_.end()) return it->second;
    const Statement& s = decl(id, "gerbe");
    const std::string& v = s.words[0];
    GerbePtr g;
    if (v == "trivial") {
      g = deligne::make_trivial_gerbe(cover_);
    } else if (v == "coboundary") {
      const MatrixForm beta = s.options.count("beta") ? form_expr(s.options.at("beta"), 2) : MatrixForm(1);
      g = deligne::make_coboundary_gerbe(cover_, seed(id, s.options.at("seed")), beta);
    } else if (v == "twist") {
      g = deligne::apply_twist_morphism(gerbe(s.words[1]), twist(s.words[3]));
    } else if (v == "shiftxi") {
      g = deligne::shift_by_xi(gerbe(s.words[1]), form_expr(s.options.at("xi"), 2));
    } else if (v == "perturbB") {
      const int chart = static_cast<int>(as_int(s.options.at("chart"), "chart"));
      if (chart < 0 || chart >= cover_->chart_count()) throw PreconditionError("perturbB: chart out of range");
      g = deligne::perturb_B(gerbe(s.words[1]), chart, form_expr(s.options.at("form"), 2));
    } else {
      g = deligne::conjugate_lambda(gerbe(s.words[1]));
    }
    return gerbes_[id] = g;
  }

  TwistPtr twist(const std::string& id) {
    if (auto it = twists_.find(id); it != twists_.end()) return it->second;
    const Statement& s = decl(id, "twist1");
    deligne::DeligneOne a;
    if (s.words[0] == "identity") {
      a = deligne::DeligneOne::identity(cover_);
    } else {
      const double amp = s.options.count("amp") ? as_double(s.options.at("amp"), "amp") : 0.3;
      a = deligne::DeligneOne::random(cover_, seed(id, s.options.at("seed")), amp);
    }
    a.id = id + "#" + a.id;
    return twists_[id] = std::make_shared<const deligne::DeligneOne>(std::move(a));
  }

  BundleConn bundle(const std::string& id) {
    if (auto it = bundles_.find(id); it != bundles_.end()) return it->second;
    const Statement& s = decl(id, "bundle");
    const GerbePtr g = gerbe(s.on);
    const std::string& v = s.words[0];
    BundleConn b;
    auto on_g = [&](const BundleConn& x, const std::string& name) {
      if (x.bundle->gerbe != g) throw PreconditionError("bundle '" + name + "' is not on gerbe '" + s.on + "'");
      return x;
    };
    if (v == "trivial") {
      b = bundle::make_trivial_bundle(g, static_cast<int>(as_int(s.options.at("rank"), "rank")));
    } else if (v == "line") {
      if (m_.dim < 2) throw PreconditionError("line bundles need dim >= 2");
      b = bundle::make_line_bundle(g, static_cast<int>(as_int(s.options.at("k"), "k")));
    } else if (v == "sum") {
      b = bundle::direct_sum(on_g(bundle(s.words[1]), s.words[1]), on_g(bundle(s.words[2]), s.words[2]));
    } else if (v == "gauge") {
      b = bundle::gauge_bundle(on_g(bundle(s.words[1]), s.words[1]), seed(id, s.options.at("seed")));
    } else {
      b = bundle::transport_twist(bundle(s.words[1]), twist(s.words[3]), g);
    }
    return bundles_[id] = b;
  }

  ConnPtr conn(const std::string& id) {
    if (auto it = conns_.find(id); it != conns_.end()) return it->second;
    const Statement& s = *m_.find(id);
    if (s.keyword == "path") return conns_[id] = path(s);
    if (s.keyword != "connection") throw PreconditionError("'" + id + "' is not a connection");
    const BundleConn b = bundle(s.on);
    const std::string& v = s.words[0];
    auto on_b = [&](const ConnPtr& c) {
      if (c->bundle != b.bundle) throw PreconditionError("connection '" + s.words[1] + "' is not on '" + s.on + "'");
      return c;
    };
    ConnPtr c;
    if (v == "standard") {
      c = b.conn;
    } else if (v == "perturb") {
      c = bundle::perturb_connection(on_b(conn(s.words[1])), seed(id, s.options.at("seed")),
                                     as_double(s.options.at("amp"), "amp"));
    } else if (v == "transport") {
      c = bundle::transport_conn(conn(s.words[1]), b.bundle);
    } else {
      const ConnPtr base = on_b(conn(s.words[1]));
      const GerbePtr gx = deligne::shift_by_xi(base->gerbe, form_expr(s.options.at("xi"), 2));
      c = bundle::retag(BundleConn{base->bundle, base}, gx).conn;
    }
    return conns_[id] = c;
  }

  MatrixForm form(const std::string& id) {
    const Statement& s = decl(id, "form");
    return form_expr(s.words[0], static_cast<int>(as_int(s.options.at("deg"), "deg")));
  }

  ktheory::PointForm point_form(const std::string& id) { return deligne::global_form(form(id)); }

  static MatrixForm form_expr(const std::string& text, int deg) {
    MatrixForm f = calculus::parse_form(text);
    const int d = f.degree();
    if (d != deg && !(f.terms().empty()))
      throw PreconditionError("form '" + text + "' has degree " + std::to_string(d) + ", expected " +
                              std::to_string(deg));
    return f;
  }

 private:
  const Statement& decl(const std::string& id, const std::string& kind) const {
    const Statement* s = m_.find(id);
    if (!s || s->keyword != kind) throw PreconditionError("'" + id + "' is not a declared " + kind);
    return *s;
  }

  ConnPtr path(const Statement& s) {
    const std::string& v = s.words[0];
    if (v == "gaugepath") {
      const ConnPtr g = conn(s.words[1]);
      return bundle::gauge_path(g, bundle::random_automorphism(g->bundle, seed(s.id, s.options.at("phi_seed"))));
    }
    const ConnPtr a = conn(s.words[1]), b = conn(s.words[2]);
    if (v == "affine") return bundle::affine_path(a, b);
    if (v == "eased") return bundle::eased_path(a, b);
    return bundle::detour_path(a, b, seed(s.id, s.options.at("seed")), as_double(s.options.at("amp"), "amp"));
  }

  const Manifest& m_;
  RunOptions opt_;
  std::shared_ptr<const cover::Cover> cover_;
  SampleConfig cfg_;
  std::map<std::string, GerbePtr> gerbes_;
  std::map<std::string, TwistPtr> twists_;
  std::map<std::string, BundleConn> bundles_;
  std::map<std::string, ConnPtr> conns_;
};

bundle::MorphismPtr winding_morphism(const std::shared_ptr<const cover::Cover>& c) {
  auto phi = std::make_shared<bundle::BundleMorphism>();
  phi->cover = c;
  phi->rank = 1;
  phi->id = "exp(2 pi i x1)";
  phi->phi = [](int, const calculus::EvalPoint& p) {
    calculus::JetMatrix m(1, p.nvars(), p.order);
    m(0, 0) = calculus::jet_exp(p.var_jet(0) * calculus::Complex(0.0, 2.0 * std::numbers::pi));
    return m;
  };
  return phi;
}

std::string order_string(const std::optional<nerve::BigInt>& n) { return n ? n->str() : "inf"; }

Outcome odd_chern_winding(Context& ctx, const Statement& s) {
  Outcome o;
  const auto& cov = ctx.cover();
  const GerbePtr g = deligne::make_trivial_gerbe(cov);
  const BundleConn e = bundle::make_trivial_bundle(g, 1);
  const bundle::MorphismPtr phi = winding_morphism(cov);
  const chern::PointForm ch = chern::odd_chern_form(e.conn, phi, ctx.nodes());
  // The degree-1 integral over the x1-circle, normalised by 2 pi i, is the
  // negative of the winding number in the fiber-last convention.
  for (double base : {0.13, 0.41, 0.77}) {
    const calculus::Complex I =
        chern::integrate_cycle(ch, *cov, {0}, std::vector<double>(cov->dim(), base), 64) /
        calculus::Complex(0.0, 2.0 * std::numbers::pi);
    const double winding = -I.real();
    o.absorb({Residual{"winding", std::max(std::abs(winding - 1.0), std::abs(I.imag())), 1}}, ctx.tol().quadrature);
  }
  if (s.options.count("xi")) {
    const MatrixForm xi = Context::form_expr(s.options.at("xi"), 2);
    const GerbePtr gx = deligne::shift_by_xi(g, xi);
    const BundleConn ex = bundle::retag(e, gx);
    const chern::PointForm lhs = chern::odd_chern_form(ex.conn, phi, ctx.nodes());
    const chern::PointForm rhs = chern::wedge_form(ch, chern::exp_form(xi, cov->dim(), -1.0));
    o.absorb({chern::difference(lhs, rhs, *cov, ctx.cfg(), "twist_naturality")}, ctx.tol().quadrature);
  }
  return o;
}

Outcome hexagon(Context& ctx, const Statement& s) {
  const ConnPtr e = ctx.conn(s.words[0]), f = ctx.conn(s.words[1]);
  if (e->bundle != f->bundle) throw PreconditionError("hexagon: both connections must live on one bundle");
  ktheory::HexagonInput in;
  in.e = ktheory::make_generator(e, ctx.point_form(s.options.at("omega")), s.words[0]);
  in.f = ktheory::make_generator(f, ctx.point_form(s.options.at("eta")), s.words[1]);
  in.stabilizer = s.words.size() > 2 ? ctx.conn(s.words[2]) : bundle::make_trivial_bundle(e->gerbe, 1).conn;
  if (in.stabilizer->gerbe->lambda_id != e->gerbe->lambda_id)
    throw PreconditionError("hexagon: stabilizer on a different gerbe");
  in.phi = bundle::random_automorphism(bundle::direct_sum(e->bundle, in.stabilizer->bundle),
                                       ctx.seed("hexagon:" + s.words[0], s.options.at("seed")));
  in.theta = ctx.point_form(s.options.at("theta"));
  if (s.options.count("defect")) in.omega_defect = ctx.point_form(s.options.at("defect"));
  Outcome o;
  o.absorb(ktheory::hexagon_suite(in, ctx.cfg(), ctx.nodes()), ctx.tol().closed);
  return o;
}

Outcome certificate(Context& ctx, const Statement& s) {
  const ConnPtr c = ctx.conn(s.words[0]);
  const ktheory::Generator g = ktheory::make_generator(c, ctx.point_form(s.options.at("omega")), s.words[0]);
  const std::string kind = s.options.at("kind");
  const std::string declared = s.options.count("seed") ? s.options.at("seed") : "0";
  const std::uint64_t seed = ctx.seed("certificate:" + s.words[0], declared);
  Outcome o;
  if (kind == "reflexive") {
    o.absorb(ktheory::verify_certificate(g, g, ktheory::reflexive_certificate(g), ctx.cfg(), ctx.nodes()),
             ctx.tol().quadrature);
  } else if (kind == "gauge") {
    const auto [g2, cert] = ktheory::gauge_equivalent(g, bundle::random_automorphism(c->bundle, seed), ctx.nodes());
    o.absorb(ktheory::verify_certificate(g, g2, cert, ctx.cfg(), ctx.nodes()), ctx.tol().quadrature);
  } else if (kind == "chain") {
    const ConnPtr c2 = bundle::perturb_connection(c, seed, 0.3);
    const ConnPtr c3 = bundle::perturb_connection(c, seed + 1, 0.3);
    const ktheory::Chain ch = ktheory::chain_certificates(g, c2, c3, ctx.nodes());
    o.absorb(ktheory::verify_certificate(ch.g1, ch.g2, ch.c12, ctx.cfg(), ctx.nodes()), ctx.tol().quadrature);
    o.absorb(ktheory::verify_certificate(ch.g2, ch.g3, ch.c23, ctx.cfg(), ctx.nodes()), ctx.tol().quadrature);
    o.absorb(ktheory::verify_certificate(ch.g1, ch.g3, ch.c13, ctx.cfg(), ctx.nodes()),
             ctx.tol().double_quadrature);
  } else {
    throw PreconditionError("certificate: kind must be reflexive, gauge or chain");
  }
  return o;
}

Outcome dd_class(Context& ctx, const Statement& s) {
  const GerbePtr g = ctx.gerbe(s.words[0]);
  const nerve::AbstractComplex k = nerve::AbstractComplex::from_cover(*ctx.cover());
  const nerve::DDResult dd = nerve::dd_cocycle(*g, ctx.tol().quadrature, 5, ctx.cfg().seed);
  Outcome o;
  o.absorb({Residual{"integrality", std::max(dd.max_fraction, dd.max_spread), dd.points}}, ctx.tol().quadrature);
  const std::string order = order_string(nerve::torsion_order(k, dd.cocycle));
  if (order != s.options.at("expect")) o.fail("torsion order " + order + ", expected " + s.options.at("expect"));
  if (s.options.count("twist")) {
    const GerbePtr t = deligne::apply_twist_morphism(g, ctx.twist(s.options.at("twist")));
    const nerve::DDResult dt = nerve::dd_cocycle(*t, ctx.tol().quadrature, 5, ctx.cfg().seed);
    o.absorb({Residual{"integrality", std::max(dt.max_fraction, dt.max_spread), dt.points}}, ctx.tol().quadrature);
    nerve::IntCochain diff{3, {}};
    for (std::size_t i = 0; i < dd.cocycle.values.size(); ++i)
      diff.values.push_back(dt.cocycle.values[i] - dd.cocycle.values[i]);
    if (!nerve::solve_coboundary(k, diff)) o.fail("twisted DD cocycle is not cohomologous");
  }
  return o;
}

Outcome cohomology(Context* ctx, const Statement& s) {
  const std::string& name = s.words[0];
  nerve::AbstractComplex k;
  if (name == "circle") {
    k = nerve::AbstractComplex::circle();
  } else if (name == "rp2") {
    k = nerve::AbstractComplex::rp2();
  } else if (name == "nerve") {
    if (!ctx) throw PreconditionError("cohomology nerve: manifest has no manifold");
    k = nerve::AbstractComplex::from_cover(*ctx->cover());
  } else if (name.rfind("file:", 0) == 0) {
    k = nerve::AbstractComplex::load(name.substr(5));
  } else {
    throw PreconditionError("cohomology: unknown complex '" + name + "'");
  }
  const int q = static_cast<int>(as_int(s.options.at("q"), "q"));
  const nerve::Cohomology h = nerve::cohomology(k, q);
  Outcome o;
  o.points = static_cast<long>(k.simplices(q).size());
  if (h.betti != as_int(s.options.at("betti"), "betti"))
    o.fail("betti number " + std::to_string(h.betti) + ", expected " + s.options.at("betti"));
  std::string tors;
  for (const auto& t : h.torsion) tors += (tors.empty() ? "" : ",") + t.str();
  if (tors.empty()) tors = "none";
  if (s.options.count("torsion") && tors != s.options.at("torsion"))
    o.fail("torsion " + tors + ", expected " + s.options.at("torsion"));
  if (s.options.count("generator_order")) {
    nerve::IntCochain z{q, std::vector<std::int64_t>(k.simplices(q).size(), 0)};
    if (z.values.empty()) throw PreconditionError("cohomology: no simplices in degree q");
    z.values[0] = 1;
    const std::string order = order_string(nerve::torsion_order(k, z));
    if (order != s.options.at("generator_order"))
      o.fail("generator order " + order + ", expected " + s.options.at("generator_order"));
  }
  o.max = o.pass ? 0.0 : 1.0;
  return o;
}

Outcome chern_number(Context& ctx, const Statement& s) {
  if (ctx.cover()->dim() < 2) throw PreconditionError("chern_number needs dim >= 2");
  const ConnPtr c = ctx.conn(s.words[0]);
  const double k = static_cast<double>(as_int(s.options.at("k"), "k"));
  Outcome o;
  auto add = [&](double value, const std::string& name) {
    o.absorb({Residual{name, std::abs(value - k), 1}}, ctx.tol().pointwise);
  };
  add(chern::chern_number(c), "chern");
  const BundleConn bc{c->bundle, c};
  if (s.options.count("refine")) {
    auto tau = std::make_shared<cover::CoverMap>();
    auto fine = std::make_shared<const cover::Cover>(
        ctx.cover()->refine(static_cast<int>(as_int(s.options.at("refine"), "refine")), tau.get()));
    const GerbePtr gf = deligne::pullback_gerbe(c->gerbe, fine, tau);
    add(chern::chern_number(bundle::pullback(bc, gf).conn), "refined");
  }
  if (s.options.count("translate")) {
    std::vector<int> steps;
    for (const auto& part : split(s.options.at("translate"), ','))
      steps.push_back(static_cast<int>(as_int(part, "translate")));
    steps.resize(ctx.cover()->dim(), 0);
    auto map = std::make_shared<const cover::CoverMap>(ctx.cover()->translation(steps));
    const GerbePtr gt = deligne::pullback_gerbe(c->gerbe, ctx.cover(), map);
    add(chern::chern_number(bundle::pullback(bc, gt).conn), "translated");
  }
  return o;
}

Outcome twist_compat(Context& ctx, const Statement& s) {
  const ConnPtr a = ctx.conn(s.words[0]), b = ctx.conn(s.words[1]);
  if (a->gerbe != b->gerbe) throw PreconditionError("twist_compat: connections on different gerbes");
  const ktheory::FormalDifference x{ktheory::make_generator(a, ctx.point_form(s.options.at("omega")), s.words[0]),
                                    ktheory::make_generator(b, ctx.point_form(s.options.at("eta")), s.words[1])};
  const TwistPtr alpha = ctx.twist(s.options.at("twist"));
  const MatrixForm xi = Context::form_expr(s.options.at("xi"), 2);
  const GerbePtr twisted = deligne::apply_twist_morphism(a->gerbe, alpha);
  const GerbePtr shifted = deligne::shift_by_xi(a->gerbe, xi);
  Outcome o;
  o.absorb(ktheory::twist_compat(x, alpha, twisted, xi, shifted, ctx.point_form(s.options.at("theta")), ctx.cfg()),
           ctx.tol().closed);
  return o;
}

Outcome transgression(Context& ctx, const Statement& s) {
  const ConnPtr p = ctx.conn(s.words[0]);
  Outcome o;
  const ResidualReport fine = chern::check_transgression(p, ctx.cfg(), ctx.nodes());
  o.absorb(fine, ctx.tol().quadrature);
  if (s.options.count("coarse")) {
    const int n = static_cast<int>(as_int(s.options.at("coarse"), "coarse"));
    const double coarse = chern::check_transgression(p, ctx.cfg(), n)[0].max;
    // Roundoff floor so that an exact fine rule does not divide by zero.
    const double ratio = coarse / std::max(fine[0].max, 1e-300);
    if (!(ratio >= 1e3)) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "residual ratio %.3g between %d and %d nodes is below 1e3", ratio, n,
                    ctx.nodes());
      o.fail(buf);
    }
  }
  return o;
}

Outcome run_check(Context* ctx_ptr, const Statement& s) {
  if (s.id == "cohomology") return cohomology(ctx_ptr, s);
  if (!ctx_ptr) throw PreconditionError("manifest has no manifold");
  Context& ctx = *ctx_ptr;
  const SampleConfig& cfg = ctx.cfg();
  const Tolerances& tol = ctx.tol();
  Outcome o;
  if (s.id == "validate_gerbe") {
    const GerbePtr g = ctx.gerbe(s.words[0]);
    o.absorb(deligne::validate_gerbe(*g, cfg), tol.pointwise);
    o.absorb(deligne::check_curvature_H(*g, cfg), tol.pointwise);
  } else if (s.id == "validate_bundle") {
    o.absorb(bundle::validate_bundle(*ctx.bundle(s.words[0]).bundle, cfg), tol.pointwise);
  } else if (s.id == "validate_connection") {
    const ConnPtr c = ctx.conn(s.words[0]);
    if (c->parametric)
      o.absorb(bundle::validate_connection(*c, cfg, {0.0, 0.3, 0.7, 1.0}), tol.pointwise);
    else
      o.absorb(bundle::validate_connection(*c, cfg), tol.pointwise);
  } else if (s.id == "ch_closed") {
    o.absorb(chern::check_ch_closed(ctx.conn(s.words[0]), cfg), tol.closed);
  } else if (s.id == "ch_glue") {
    o.absorb(chern::check_ch_glue(ctx.conn(s.words[0]), cfg), tol.pointwise);
  } else if (s.id == "ch_additive") {
    o.absorb(chern::check_ch_additive(ctx.conn(s.words[0]), ctx.conn(s.words[1]), cfg), tol.pointwise);
  } else if (s.id == "ch_rescale") {
    o.absorb(chern::check_ch_rescale(ctx.conn(s.words[0]), Context::form_expr(s.options.at("xi"), 2), cfg),
             tol.closed);
  } else if (s.id == "transgression") {
    o = transgression(ctx, s);
  } else if (s.id == "bigon") {
    o.absorb(chern::check_bigon(ctx.conn(s.words[0]), ctx.conn(s.words[1]), cfg, ctx.nodes()), tol.double_quadrature);
  } else if (s.id == "cs_gauge") {
    const ConnPtr p = ctx.conn(s.words[0]);
    const auto phi = bundle::random_automorphism(p->bundle, ctx.seed("cs_gauge:" + s.words[0], s.options.at("phi_seed")));
    o.absorb(chern::check_cs_gauge(p, phi, cfg, ctx.nodes()), tol.closed);
  } else if (s.id == "odd_chern_winding") {
    o = odd_chern_winding(ctx, s);
  } else if (s.id == "stokes_fiber") {
    o.absorb(chern::check_stokes(ctx.form(s.words[0]), *ctx.cover(), cfg, ctx.nodes()), tol.quadrature);
  } else if (s.id == "hexagon") {
    o = hexagon(ctx, s);
  } else if (s.id == "certificate") {
    o = certificate(ctx, s);
  } else if (s.id == "dd_class") {
    o = dd_class(ctx, s);
  } else if (s.id == "chern_number") {
    o = chern_number(ctx, s);
  } else if (s.id == "twist_compat") {
    o = twist_compat(ctx, s);
  } else {
    throw PreconditionError("unknown check '" + s.id + "'");
  }
  return o;
}

bool has_manifold(const Manifest& m) {
  if (!m.objects.empty()) return true;
  for (const auto& c : m.checks)
    if (c.id != "cohomology" || (!c.words.empty() && c.words[0] == "nerve")) return true;
  return false;
}

}  // namespace

int Report::passed() const {
  int n = 0;
  for (const auto& c : checks) n += c.pass;
  return n;
}

int Report::failed() const { return static_cast<int>(checks.size()) - passed(); }

Report run(const Manifest& m, const RunOptions& opt) {
  Report r;
  r.scenario = m.scenario;
  std::unique_ptr<Context> ctx;
  if (has_manifold(m)) ctx = std::make_unique<Context>(m, opt);
  for (const auto& s : m.checks) {
    CheckResult c;
    c.name = s.id;
    for (const auto& w : s.words) c.target += (c.target.empty() ? "" : ",") + w;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Outcome o = run_check(ctx.get(), s);
      c.pass = o.pass;
      c.max_residual = o.max;
      c.points = o.points;
      if (!o.pass) c.message = o.message;
    } catch (const std::exception& e) {
      c.pass = false;
      c.max_residual = std::numeric_limits<double>::infinity();
      c.message = e.what();
    }
    c.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.checks.push_back(c);
  }
  return r;
}

std::string format_report(const Report& r, bool with_wall_time) {
  std::ostringstream o;
  char buf[64];
  for (const auto& c : r.checks) {
    std::snprintf(buf, sizeof buf, "%.17g", c.max_residual);
    o << "CHECK " << c.name << " " << (c.pass ? "PASS" : "FAIL") << " max_residual=" << buf
      << " points=" << c.points;
    if (!c.target.empty()) o << " on=" << c.target;
    if (!c.message.empty()) {
      std::string msg = c.message;
      for (char& ch : msg)
        if (ch == '"' || ch == '\n') ch = '\'';
      o << " error=\"" << msg << "\"";
    }
    if (with_wall_time) {
      std::snprintf(buf, sizeof buf, "%.3f", c.wall_seconds);
      o << " wall_s=" << buf;
    }
    o << "\n";
  }
  o << "SUMMARY pass=" << r.passed() << " fail=" << r.failed() << "\n";
  return o.str();
}

}  // namespace gerbecalc::cli
