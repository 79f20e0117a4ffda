#include "gerbecalc/ktheory/ktheory.hpp"

#include "gerbecalc/error.hpp"

namespace gerbecalc::ktheory {

using bundle::BundleConn;
using bundle::BundleMorphism;
using chern::difference;
using chern::dH_form;
using chern::sum_form;

namespace {

ConnPtr zero_conn(const GerbePtr& g) { return bundle::make_zero_bundle(g).conn; }

MorphismPtr identity_of(const BundlePtr& e) {
  return std::make_shared<BundleMorphism>(BundleMorphism::identity(e->gerbe->cover, e->rank));
}

PointForm pulled(const PointForm& f, std::shared_ptr<const cover::CoverMap> map) {
  return [f, map](const calculus::EvalPoint& p) { return f(cover::apply_map(*map, p)); };
}

}  // namespace

Generator make_generator(const ConnPtr& c, PointForm omega, std::string id) {
  return Generator{c, std::move(omega), std::move(id)};
}

Generator generator_sum(const Generator& a, const Generator& b) {
  return Generator{bundle::direct_sum_conn(a.conn, b.conn), sum_form(a.omega, b.omega), "(" + a.id + "+" + b.id + ")"};
}

Generator map_a(const GerbePtr& g, PointForm theta) { return Generator{zero_conn(g), std::move(theta), "a"}; }

std::pair<BundlePtr, BundlePtr> map_I(const FormalDifference& x) { return {x.plus.bundle(), x.minus.bundle()}; }

PointForm generator_R(const Generator& g) { return sum_form(chern::ch_form(g.conn), dH_form(g.omega, g.gerbe())); }

PointForm map_R(const FormalDifference& x) { return sum_form(generator_R(x.plus), generator_R(x.minus), -1.0); }

PointForm certificate_cs(const Generator& g1, const Generator& g2, const Certificate& c, int nodes) {
  const ConnPtr left = bundle::direct_sum_conn(g1.conn, c.stabilizer);
  const ConnPtr right = bundle::direct_sum_conn(g2.conn, c.stabilizer);
  const ConnPtr pulled_right = bundle::gauge_transform(right, c.phi, left->bundle);
  const ConnPtr path = c.path == Certificate::Path::kEased ? bundle::eased_path(left, pulled_right)
                                                            : bundle::affine_path(left, pulled_right);
  return chern::cs_form(path, nodes);
}

ResidualReport verify_certificate(const Generator& g1, const Generator& g2, const Certificate& c,
                                  const SampleConfig& cfg, int nodes) {
  if (g1.gerbe()->lambda_id != g2.gerbe()->lambda_id) throw PreconditionError("certificate: generators over different gerbes");
  if (g1.conn->rank() + c.stabilizer->rank() != c.phi->rank || g2.conn->rank() != g1.conn->rank())
    throw PreconditionError("certificate: shape mismatch");
  const cover::Cover& cov = g1.conn->cover();
  const PointForm rhs = sum_form(sum_form(g1.omega, g2.omega, -1.0), dH_form(c.mu, g1.gerbe()));
  Residual r = difference(certificate_cs(g1, g2, c, nodes), rhs, cov, cfg, "certificate");
  const BundlePtr left = bundle::direct_sum(g1.bundle(), c.stabilizer->bundle);
  const BundlePtr right = bundle::direct_sum(g2.bundle(), c.stabilizer->bundle);
  ResidualReport iso = bundle::validate_morphism(*c.phi, *left, *right, cfg);
  iso[0].name = "certificate_iso";
  return {r, iso[0]};
}

Certificate reflexive_certificate(const Generator& g) {
  Certificate c;
  c.stabilizer = zero_conn(g.gerbe());
  c.phi = identity_of(g.bundle());
  c.mu = chern::zero_form();
  return c;
}

std::pair<Generator, Certificate> gauge_equivalent(const Generator& g, const MorphismPtr& phi, int nodes) {
  Generator g2{g.conn, sum_form(g.omega, chern::odd_chern_form(g.conn, phi, nodes), -1.0), g.id + "~" + phi->id};
  Certificate c;
  c.stabilizer = zero_conn(g.gerbe());
  c.phi = phi;
  c.mu = chern::zero_form();
  return {g2, c};
}

Chain chain_certificates(const Generator& g1, const ConnPtr& gamma2, const ConnPtr& gamma3, int nodes) {
  Chain ch;
  ch.g1 = g1;
  const PointForm cs12 = chern::cs_form(bundle::affine_path(g1.conn, gamma2), nodes);
  const PointForm cs23 = chern::cs_form(bundle::affine_path(gamma2, gamma3), nodes);
  ch.g2 = Generator{gamma2, sum_form(g1.omega, cs12, -1.0), g1.id + "'"};
  ch.g3 = Generator{gamma3, sum_form(ch.g2.omega, cs23, -1.0), g1.id + "''"};
  ch.c12 = reflexive_certificate(g1);
  ch.c23 = reflexive_certificate(g1);
  ch.c13 = reflexive_certificate(g1);
  const ConnPtr tri = bundle::triangle_family(g1.conn, gamma2, gamma3);
  ch.c13.mu = [tri, nodes](const calculus::EvalPoint& p) { return chern::bigon_primitive(tri, p, nodes); };
  return ch;
}

Generator twist_phi(const Generator& g, const std::shared_ptr<const deligne::DeligneOne>& alpha,
                    const GerbePtr& target) {
  const BundleConn t = bundle::transport_twist(BundleConn{g.bundle(), g.conn}, alpha, target);
  return Generator{t.conn, g.omega, "phi[" + alpha->id + "]" + g.id};
}

FormalDifference twist_phi(const FormalDifference& x, const std::shared_ptr<const deligne::DeligneOne>& alpha,
                           const GerbePtr& target) {
  return {twist_phi(x.plus, alpha, target), twist_phi(x.minus, alpha, target)};
}

Generator twist_xi(const Generator& g, const calculus::MatrixForm& xi, const GerbePtr& target) {
  const BundleConn t = bundle::retag(BundleConn{g.bundle(), g.conn}, target);
  const PointForm omega = chern::wedge_form(g.omega, chern::exp_form(xi, g.conn->cover().dim(), -1.0));
  return Generator{t.conn, omega, "Xi" + g.id};
}

FormalDifference twist_xi(const FormalDifference& x, const calculus::MatrixForm& xi, const GerbePtr& target) {
  return {twist_xi(x.plus, xi, target), twist_xi(x.minus, xi, target)};
}

Generator refine(const Generator& g, const GerbePtr& fine) {
  const BundleConn t = bundle::pullback(BundleConn{g.bundle(), g.conn}, fine);
  return Generator{t.conn, pulled(g.omega, fine->map), "r" + g.id};
}

FormalDifference refine(const FormalDifference& x, const GerbePtr& fine) {
  return {refine(x.plus, fine), refine(x.minus, fine)};
}

ResidualReport hexagon_suite(const HexagonInput& in, const SampleConfig& cfg, int nodes) {
  const GerbePtr g = in.e.gerbe();
  const cover::Cover& cov = in.e.conn->cover();

  // Exactness record for the kernel element, made from the unperturbed omega.
  const ConnPtr eg = bundle::direct_sum_conn(in.e.conn, in.stabilizer);
  const ConnPtr fg = bundle::direct_sum_conn(in.f.conn, in.stabilizer);
  const Generator fg_gen{fg, in.f.omega, "F+G"};
  Certificate cert;
  cert.stabilizer = zero_conn(g);
  cert.phi = in.phi;
  cert.mu = chern::zero_form();
  const PointForm mu = sum_form(in.f.omega, certificate_cs(Generator{eg, in.f.omega, "E+G"}, fg_gen, cert, nodes));
  const PointForm theta_rec = sum_form(in.e.omega, mu, -1.0);

  const PointForm omega = in.omega_defect ? sum_form(in.e.omega, in.omega_defect) : in.e.omega;
  const FormalDifference x{Generator{in.e.conn, omega, in.e.id}, in.f};

  // ch(G^E) - ch(G^F) - R(x) = -(d+H)(omega - eta).
  const PointForm chI = sum_form(chern::ch_form(in.e.conn), chern::ch_form(in.f.conn), -1.0);
  const PointForm lhs1 = sum_form(chI, map_R(x), -1.0);
  const PointForm rhs1 = sum_form(chern::zero_form(), dH_form(sum_form(omega, in.f.omega, -1.0), g), -1.0);
  Residual r1 = difference(lhs1, rhs1, cov, cfg, "ch_I_vs_R");

  // R(a(theta)) = (d+H) theta.
  const FormalDifference ax{map_a(g, in.theta), map_a(g, chern::zero_form())};
  Residual r2 = difference(map_R(ax), dH_form(in.theta, g), cov, cfg, "R_a");

  // Replay: x = [(E+G, ., omega)] - [(F+G, ., eta)] = [(E+G, ., omega)] - [(E+G, ., mu)] = a(omega - mu).
  ResidualReport cr = verify_certificate(Generator{eg, mu, "E+G"}, fg_gen, cert, cfg, nodes);
  cr[0].name = "kernel_certificate";
  cr[1].name = "kernel_iso";
  const FormalDifference rewritten{Generator{eg, omega, "E+G"}, Generator{eg, mu, "E+G"}};
  Residual r3 = difference(map_R(rewritten), dH_form(theta_rec, g), cov, cfg, "kernel_exact");

  Residual r4{"I_a"};
  const auto [ia, ib] = map_I(FormalDifference{map_a(g, theta_rec), map_a(g, chern::zero_form())});
  r4.add(static_cast<double>(ia->rank + ib->rank));
  return {r1, r2, cr[0], cr[1], r3, r4};
}

Residual transition_difference(const bundle::TwistedBundle& a, const bundle::TwistedBundle& b,
                               const SampleConfig& cfg, const std::string& name) {
  Residual r{name};
  if (a.rank != b.rank) {
    r.add(std::numeric_limits<double>::infinity());
    return r;
  }
  const cover::Cover& c = a.cover();
  const auto& e1 = c.simplices(1);
  for (const auto& s : e1)
    for (const auto& sp : c.sample_points(s, cfg.per_simplex(e1.size()), cfg.seed)) {
      const calculus::EvalPoint p = deligne::sample_eval_point(s, sp, 0, 0);
      r.add(bundle::matrix_residual(a.g(s, p) - b.g(s, p)));
    }
  if (e1.empty()) r.add(0.0);
  return r;
}

ResidualReport twist_compat(const FormalDifference& x, const std::shared_ptr<const deligne::DeligneOne>& alpha,
                            const GerbePtr& twisted, const calculus::MatrixForm& xi, const GerbePtr& shifted,
                            const PointForm& theta, const SampleConfig& cfg) {
  const cover::Cover& cov = x.plus.conn->cover();
  const int dim = cov.dim();
  const FormalDifference xx = twist_xi(x, xi, shifted);
  Residual i_xi = transition_difference(*xx.plus.bundle(), *x.plus.bundle(), cfg, "I_Xi");
  i_xi.merge(transition_difference(*xx.minus.bundle(), *x.minus.bundle(), cfg, "I_Xi"));

  const PointForm expm = chern::exp_form(xi, dim, -1.0);
  Residual r_xi = difference(map_R(xx), chern::wedge_form(expm, map_R(x)), cov, cfg, "R_Xi");

  const Generator xa = twist_xi(map_a(x.plus.gerbe(), theta), xi, shifted);
  Residual xi_a = difference(xa.omega, chern::wedge_form(theta, expm), cov, cfg, "Xi_a");
  xi_a.add(static_cast<double>(xa.conn->rank()));

  const FormalDifference xp = twist_phi(x, alpha, twisted);
  Residual i_phi = transition_difference(*xp.plus.bundle(), *bundle::transport_bundle(x.plus.bundle(), alpha, twisted),
                                         cfg, "I_phi");
  i_phi.merge(transition_difference(*xp.minus.bundle(),
                                    *bundle::transport_bundle(x.minus.bundle(), alpha, twisted), cfg, "I_phi"));

  Residual r_phi = difference(map_R(xp), map_R(x), cov, cfg, "R_phi");
  return {i_xi, r_xi, xi_a, i_phi, r_phi};
}

}  // namespace gerbecalc::ktheory
