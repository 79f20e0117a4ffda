#pragma once

#include <string>
#include <utility>

#include "gerbecalc/chern/chern.hpp"

namespace gerbecalc::ktheory {

using bundle::BundlePtr;
using bundle::ConnPtr;
using bundle::MorphismPtr;
using chern::PointForm;
using deligne::GerbePtr;

inline constexpr int kDefaultNodes = chern::kDefaultNodes;

// Triple (E, Gamma, omega); E is Gamma's bundle.
struct Generator {
  ConnPtr conn;
  PointForm omega;
  std::string id;

  const BundlePtr& bundle() const { return conn->bundle; }
  const GerbePtr& gerbe() const { return conn->gerbe; }
};

// [plus] - [minus].
struct FormalDifference {
  Generator plus, minus;
};

// Witness that (E, G, w) ~ (E', G', w'): stabilizer (F, G^F), isomorphism
// phi : E + F -> E' + F, and mu with
// cs(G + G^F -> phi*(G' + G^F)) = (w - w') + (d+H) mu.
struct Certificate {
  enum class Path { kAffine, kEased };
  ConnPtr stabilizer;
  MorphismPtr phi;
  PointForm mu;
  Path path = Path::kAffine;
};

Generator make_generator(const ConnPtr& c, PointForm omega, std::string id);
Generator generator_sum(const Generator& a, const Generator& b);
// (O, 0, theta) over g.
Generator map_a(const GerbePtr& g, PointForm theta);
// Underlying bundles.
std::pair<BundlePtr, BundlePtr> map_I(const FormalDifference& x);
// ch(G) + (d+H) omega.
PointForm generator_R(const Generator& g);
PointForm map_R(const FormalDifference& x);

// Residuals "certificate" and "certificate_iso" (phi intertwines).
ResidualReport verify_certificate(const Generator& g1, const Generator& g2, const Certificate& c,
                                  const SampleConfig& cfg, int nodes = kDefaultNodes);
// cs along the certificate path.
PointForm certificate_cs(const Generator& g1, const Generator& g2, const Certificate& c, int nodes = kDefaultNodes);

// (O, identity, 0).
Certificate reflexive_certificate(const Generator& g);
// g2 = (E, Gamma, omega - Ch(E, phi, Gamma)) with certificate (O, phi, 0).
std::pair<Generator, Certificate> gauge_equivalent(const Generator& g, const MorphismPtr& phi,
                                                   int nodes = kDefaultNodes);
// g1 -> g2 -> g3 along connections G1, G2, G3 on one bundle, and the composite
// certificate g1 -> g3 whose mu is the double integral over the triangle family.
struct Chain {
  Generator g1, g2, g3;
  Certificate c12, c23, c13;
};
Chain chain_certificates(const Generator& g1, const ConnPtr& gamma2, const ConnPtr& gamma3, int nodes = kDefaultNodes);

// phi_alpha: transport along alpha, omega unchanged; `target` = twist(gerbe, alpha).
Generator twist_phi(const Generator& g, const std::shared_ptr<const deligne::DeligneOne>& alpha,
                    const GerbePtr& target);
FormalDifference twist_phi(const FormalDifference& x, const std::shared_ptr<const deligne::DeligneOne>& alpha,
                           const GerbePtr& target);
// Xi: connection over lambda_xi, omega -> omega ^ exp(-xi); `target` = shift(gerbe, xi).
Generator twist_xi(const Generator& g, const calculus::MatrixForm& xi, const GerbePtr& target);
FormalDifference twist_xi(const FormalDifference& x, const calculus::MatrixForm& xi, const GerbePtr& target);
// Restriction to a refinement; `fine` = pullback_gerbe(gerbe, ...).
Generator refine(const Generator& g, const GerbePtr& fine);
FormalDifference refine(const FormalDifference& x, const GerbePtr& fine);

// Hexagon data: x = [(E, G^E, omega)] - [(F, G^F, eta)] with phi : E + G -> F + G.
struct HexagonInput {
  Generator e, f;
  ConnPtr stabilizer;
  MorphismPtr phi;
  PointForm theta;
  // Perturbation of omega applied after the exactness record is made.
  PointForm omega_defect;
};
// Residuals "ch_I_vs_R", "R_a", "kernel_certificate", "kernel_iso", "kernel_exact", "I_a".
ResidualReport hexagon_suite(const HexagonInput& in, const SampleConfig& cfg, int nodes = kDefaultNodes);

// Residuals "I_Xi", "R_Xi", "Xi_a", "I_phi", "R_phi".
ResidualReport twist_compat(const FormalDifference& x, const std::shared_ptr<const deligne::DeligneOne>& alpha,
                            const GerbePtr& twisted, const calculus::MatrixForm& xi, const GerbePtr& shifted,
                            const PointForm& theta, const SampleConfig& cfg);

// Max over 1-simplex samples of |g_ji - h_ji| for two bundles on one cover.
Residual transition_difference(const bundle::TwistedBundle& a, const bundle::TwistedBundle& b,
                               const SampleConfig& cfg, const std::string& name);

}  // namespace gerbecalc::ktheory
