#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "gerbecalc/calculus/form.hpp"
#include "gerbecalc/calculus/matrix_form.hpp"
#include "gerbecalc/calculus/random.hpp"
#include "gerbecalc/check.hpp"
#include "gerbecalc/cover/cover.hpp"

namespace gerbecalc::deligne {

using calculus::EvalPoint;
using calculus::FormJet;
using calculus::Jet;
using cover::Simplex;

// Canonical simplex data: the argument is a sorted simplex (v0 < v1 < ...) and
// the value is the cochain on the ordered tuple (v0, v1, ...). The point may be
// expressed in any member chart.
using ScalarCochainFn = std::function<Jet(const Simplex&, const EvalPoint&)>;
using FormCochainFn = std::function<FormJet(const Simplex&, const EvalPoint&)>;
// Global scalar form evaluated in the chart of the point.
using GlobalFormFn = std::function<FormJet(const EvalPoint&)>;

// Global form given by a periodic expression in the chart coordinates.
GlobalFormFn global_form(const calculus::MatrixForm& f);

// Deligne 1-cochain ({chi_ji}, {Pi_i}).
struct DeligneOne {
  std::shared_ptr<const cover::Cover> cover;
  ScalarCochainFn chi;  // sorted (v0,v1) -> chi_{v1 v0}
  FormCochainFn pi;     // {i} -> Pi_i
  std::string id;

  // chi_{ji}, with chi_{ii} = 1 and chi_{ij} = chi_{ji}^{-1}.
  Jet chi_at(int j, int i, const EvalPoint& p) const;
  FormJet pi_at(int i, const EvalPoint& p) const;

  static DeligneOne identity(std::shared_ptr<const cover::Cover> c);
  // chi = exp(i f), Pi = i sum_k g_k dx_k with f, g_k random trigonometric.
  static DeligneOne random(std::shared_ptr<const cover::Cover> c, std::uint64_t seed, double amp = 0.3);
  DeligneOne inverse() const;
};

class GerbeConn;
using GerbePtr = std::shared_ptr<const GerbeConn>;

// U(1)-gerbe with connection (lambda, A, B) on a grid cover.
class GerbeConn {
 public:
  enum class Origin { kTrivial, kTwist, kShift, kPullback, kDefect };

  std::shared_ptr<const cover::Cover> cover;
  ScalarCochainFn lambda;  // sorted (v0,v1,v2) -> lambda_{v2 v1 v0}
  FormCochainFn A;         // sorted (v0,v1) -> A_{v1 v0}
  FormCochainFn B;         // {i} -> B_i
  // Bundles may share a cocycle only if their gerbes carry the same id.
  std::string lambda_id;

  Origin origin = Origin::kTrivial;
  GerbePtr parent;
  std::shared_ptr<const DeligneOne> alpha;           // kTwist
  std::optional<calculus::MatrixForm> xi;            // kShift
  std::shared_ptr<const cover::CoverMap> map;        // kPullback

  // lambda_{kji} with complete normalization.
  Jet lambda_at(int k, int j, int i, const EvalPoint& p) const;
  // A_{ji}, antisymmetric, zero on repeated indices.
  FormJet A_at(int j, int i, const EvalPoint& p) const;
  // B in the chart of p.
  FormJet B_at(const EvalPoint& p) const;
  // H = dB in the chart of p.
  FormJet H_at(const EvalPoint& p) const;
};

GerbePtr make_trivial_gerbe(std::shared_ptr<const cover::Cover> c);
// lambda' = lambda * delta(chi), A' = A + dlog chi + delta Pi, B' = B + dPi.
GerbePtr apply_twist_morphism(const GerbePtr& g, std::shared_ptr<const DeligneOne> a);
// B' = B + xi.
GerbePtr shift_by_xi(const GerbePtr& g, const calculus::MatrixForm& xi);
// Trivial gerbe twisted by a random Deligne 1-cochain, then shifted by beta.
GerbePtr make_coboundary_gerbe(std::shared_ptr<const cover::Cover> c, std::uint64_t seed,
                               const calculus::MatrixForm& beta);
// Pullback along a chart map from `fine` into g's cover.
GerbePtr pullback_gerbe(const GerbePtr& g, std::shared_ptr<const cover::Cover> fine,
                        std::shared_ptr<const cover::CoverMap> map);
// Defect injections for negative tests: B_chart += form; lambda -> conj(lambda).
GerbePtr perturb_B(const GerbePtr& g, int chart, const calculus::MatrixForm& form);
GerbePtr conjugate_lambda(const GerbePtr& g);

// Residuals: "normalization", "unit_modulus", "C1", "C2", "C3".
ResidualReport validate_gerbe(const GerbeConn& g, const SampleConfig& cfg);
// Residuals: "H_glue" (dB_i = dB_j on overlaps), "dH" (closedness).
ResidualReport check_curvature_H(const GerbeConn& g, const SampleConfig& cfg);

// Max |coefficient value| of a form; helper for all residuals.
double form_residual(const FormJet& f);

// Evaluation point for member `k` of a sampled simplex point.
EvalPoint sample_eval_point(const cover::Simplex& s, const cover::SamplePoint& sp, int k, int order);

}  // namespace gerbecalc::deligne
