#pragma once

#include <functional>
#include <memory>
#include <string>

#include "gerbecalc/check.hpp"
#include "gerbecalc/deligne/gerbe.hpp"

namespace gerbecalc::bundle {

using calculus::EvalPoint;
using calculus::FormJet;
using calculus::Jet;
using calculus::JetMatrix;
using cover::Simplex;
using deligne::GerbePtr;

// Per-chart data; the point is given in the chart's own coordinates.
using ChartMatrixFn = std::function<JetMatrix(int chart, const EvalPoint&)>;
using ChartFormFn = std::function<FormJet(int chart, const EvalPoint&)>;
// Sorted (v0,v1) -> g_{v1 v0}; the point may be in any chart meeting both.
using TransitionFn = std::function<JetMatrix(const Simplex&, const EvalPoint&)>;

// Family {phi_i} of U(n)-valued chart functions.
struct BundleMorphism {
  std::shared_ptr<const cover::Cover> cover;
  int rank = 0;
  ChartMatrixFn phi;
  std::string id;

  JetMatrix at(int i, const EvalPoint& p) const { return phi(i, cover->to_chart(p, i)); }

  static BundleMorphism identity(std::shared_ptr<const cover::Cover> c, int n);
  BundleMorphism inverse() const;
};
using MorphismPtr = std::shared_ptr<const BundleMorphism>;

// (a b)_i = a_i b_i.
MorphismPtr compose(const MorphismPtr& a, const MorphismPtr& b);
MorphismPtr block_sum(const MorphismPtr& a, const MorphismPtr& b);

class TwistedBundle;
using BundlePtr = std::shared_ptr<const TwistedBundle>;

// lambda-twisted bundle. `kind` records how it was built; random
// automorphisms and End(E)-valued forms are constructed along that tree.
class TwistedBundle {
 public:
  enum class Kind { kTrivial, kLine, kSum, kGauge, kTransport, kPullback, kRetag };

  GerbePtr gerbe;
  int rank = 0;
  TransitionFn g;
  std::string id;

  Kind kind = Kind::kTrivial;
  BundlePtr inner, second;                            // sum: (inner, second)
  MorphismPtr phi;                                    // kGauge: this = phi . inner
  std::shared_ptr<const deligne::DeligneOne> alpha;   // kTransport
  std::shared_ptr<const cover::CoverMap> map;         // kPullback
  int k = 0;                                          // kLine

  const cover::Cover& cover() const { return *gerbe->cover; }
  // g_{ji}, with g_{ii} = 1 and g_{ij} = g_{ji}^{-1}.
  JetMatrix g_at(int j, int i, const EvalPoint& p) const;
};

class TwistedConnection;
using ConnPtr = std::shared_ptr<const TwistedConnection>;

// Family {Gamma_i}. Path and bigon connections read t and s from the point;
// when t (or s) is an axis the dt (ds) components appear through d.
class TwistedConnection {
 public:
  BundlePtr bundle;
  GerbePtr gerbe;  // supplies A and B; same lambda as the bundle's gerbe
  ChartFormFn gamma;
  std::string id;
  bool parametric = false;  // reads t or s

  const cover::Cover& cover() const { return *gerbe->cover; }
  int rank() const { return bundle->rank; }
  FormJet gamma_at(int i, const EvalPoint& p) const { return gamma(i, cover().to_chart(p, i)); }
  FormJet at(const EvalPoint& p) const { return gamma(p.chart, p); }
  // R = d Gamma + Gamma ^ Gamma in the chart of p.
  FormJet curvature(const EvalPoint& p) const;
};

struct BundleConn {
  BundlePtr bundle;
  ConnPtr conn;
};

// Builders. On a non-trivial gerbe the construction follows the gerbe's
// origin: twist -> transport, shift/defect -> retag, pullback -> pullback.
BundleConn make_trivial_bundle(const GerbePtr& g, int rank);
BundleConn make_zero_bundle(const GerbePtr& g);
// g_ji = exp(2 pi i k x1_j n_ji) with n_ji the x2 lattice jump; Gamma_i = -2 pi i k x2 dx1.
BundleConn make_line_bundle(const GerbePtr& g, int k);

BundlePtr direct_sum(const BundlePtr& e, const BundlePtr& f);
ConnPtr direct_sum_conn(const ConnPtr& a, const ConnPtr& b);
BundleConn direct_sum(const BundleConn& a, const BundleConn& b);

// F = phi . E: h_ji = phi_j g_ji phi_i^{-1}.
BundlePtr apply_morphism(const BundlePtr& e, const MorphismPtr& phi);
// phi* Gamma^F = phi^{-1} Gamma^F phi + phi^{-1} d phi, a connection on `e`
// for phi : e -> Gamma^F's bundle.
ConnPtr gauge_transform(const ConnPtr& gamma_f, const MorphismPtr& phi, const BundlePtr& e);
// Random per-chart unitary phi and the pushed-forward connection on phi . E.
BundleConn gauge_bundle(const BundleConn& e, std::uint64_t seed);
// Random automorphism of E (commutes with every g_ji).
MorphismPtr random_automorphism(const BundlePtr& e, std::uint64_t seed, double amp = 0.4);
// Random End(E)-valued anti-hermitian 1-form, glued by conjugation.
ChartFormFn random_end_form(const BundlePtr& e, std::uint64_t seed, double amp);

// E' = (chi g, lambda'), Gamma' = Gamma + Pi 1 over `target` = twist(E.gerbe, alpha).
BundleConn transport_twist(const BundleConn& e, std::shared_ptr<const deligne::DeligneOne> alpha,
                           const GerbePtr& target);
BundlePtr transport_bundle(const BundlePtr& e, std::shared_ptr<const deligne::DeligneOne> alpha,
                           const GerbePtr& target);
ConnPtr transport_conn(const ConnPtr& c, const BundlePtr& target_bundle);
// Same cocycle and connection forms over a gerbe with the same lambda.
BundleConn retag(const BundleConn& e, const GerbePtr& target);
BundlePtr retag_bundle(const BundlePtr& e, const GerbePtr& target);
ConnPtr retag_conn(const ConnPtr& c, const BundlePtr& target_bundle);
// Pullback along a chart map; `target` = pullback_gerbe(E.gerbe, ...).
BundleConn pullback(const BundleConn& e, const GerbePtr& target);
BundlePtr pullback_bundle(const BundlePtr& e, const GerbePtr& target);
ConnPtr pullback_conn(const ConnPtr& c, const BundlePtr& target_bundle);
// Gamma + eta with eta a random End(E)-valued 1-form.
ConnPtr perturb_connection(const ConnPtr& c, std::uint64_t seed, double amp);
ConnPtr add_end_form(const ConnPtr& c, const ChartFormFn& eta, const std::string& id);

// Paths of connections parametrized by t, and two-parameter families in (s,t).
ConnPtr affine_path(const ConnPtr& g0, const ConnPtr& g1);
// Affine path with t -> (1 - cos(pi t)) / 2.
ConnPtr eased_path(const ConnPtr& g0, const ConnPtr& g1);
// Affine path plus sin(pi t) eta for a random End(E)-valued eta.
ConnPtr detour_path(const ConnPtr& g0, const ConnPtr& g1, std::uint64_t seed, double amp);
// t -> (1 - t) Gamma + t phi* Gamma.
ConnPtr gauge_path(const ConnPtr& g, const MorphismPtr& phi);
// (s,t) -> (1 - s) alpha_t + s gamma_t.
ConnPtr bigon_family(const ConnPtr& alpha, const ConnPtr& gamma);
// (s,t) -> G1 + t (G2 - G1) + s t (G3 - G2).
ConnPtr triangle_family(const ConnPtr& g1, const ConnPtr& g2, const ConnPtr& g3);
// Gauge transform of every member of a path by a t-independent phi.
ConnPtr gauge_path_pullback(const ConnPtr& path, const MorphismPtr& phi);
// Member of a path at fixed t (and s).
ConnPtr path_at(const ConnPtr& path, double t, double s = 0.0);

// Residuals "unitarity", "normalization", "cocycle".
ResidualReport validate_bundle(const TwistedBundle& e, const SampleConfig& cfg);
// Residuals "anti_hermitian", "compatibility", "curvature_glue", at each
// parameter value in `ts` (t for paths; ignored by plain connections).
ResidualReport validate_connection(const TwistedConnection& c, const SampleConfig& cfg,
                                   const std::vector<double>& ts = {0.0}, const std::vector<double>& ss = {0.0});
// Residual "intertwining": f_j g_ji = h_ji f_i, for phi : e -> f.
ResidualReport validate_morphism(const BundleMorphism& phi, const TwistedBundle& e, const TwistedBundle& f,
                                 const SampleConfig& cfg);

double matrix_residual(const JetMatrix& m);

}  // namespace gerbecalc::bundle
