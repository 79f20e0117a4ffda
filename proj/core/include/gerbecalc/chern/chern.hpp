#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "gerbecalc/bundle/bundle.hpp"
#include "gerbecalc/check.hpp"

namespace gerbecalc::chern {

using bundle::ConnPtr;
using bundle::MorphismPtr;
using bundle::TwistedConnection;
using calculus::Complex;
using calculus::EvalPoint;
using calculus::FormJet;
using deligne::GerbeConn;

// Global scalar form, evaluated in the chart of the point.
using PointForm = std::function<FormJet(const EvalPoint&)>;

inline constexpr int kDefaultNodes = 16;

// R - B 1 in the chart of p.
FormJet twisted_curvature(const TwistedConnection& c, const EvalPoint& p);
// tr (R - B 1)^m; m = 0 gives the rank.
FormJet ch_m(const TwistedConnection& c, const EvalPoint& p, int m);
// rank + sum_{m=1}^{floor(nvars/2)} ch_m / m!.
FormJet ch_total(const TwistedConnection& c, const EvalPoint& p);
// (d + H) f = df + H ^ f.
FormJet d_plus_H(const PointForm& f, const GerbeConn& g, const EvalPoint& p);

// Fiber integral over t of ch of a path connection (t last).
FormJet cs(const ConnPtr& path, const EvalPoint& p, int nodes = kDefaultNodes);
// Double fiber integral over (s,t) of ch of a two-parameter family.
FormJet bigon_primitive(const ConnPtr& family, const EvalPoint& p, int nodes = kDefaultNodes);
// cs of t -> (1 - t) Gamma + t phi* Gamma.
FormJet odd_chern(const ConnPtr& gamma, const MorphismPtr& phi, const EvalPoint& p, int nodes = kDefaultNodes);

PointForm ch_form(const ConnPtr& c);
PointForm cs_form(const ConnPtr& path, int nodes = kDefaultNodes);
PointForm odd_chern_form(const ConnPtr& gamma, const MorphismPtr& phi, int nodes = kDefaultNodes);
PointForm dH_form(const PointForm& f, const deligne::GerbePtr& g);
PointForm wedge_form(const PointForm& a, const PointForm& b);
PointForm sum_form(const PointForm& a, const PointForm& b, Complex scale_b = 1.0);
PointForm zero_form();
// exp of a global even scalar form, truncated at the torus dimension.
PointForm exp_form(const calculus::MatrixForm& xi, int top_dim, double sign);

// Max over sample points of all 0-simplices (~cfg.per_class points).
Residual max_over_torus(const cover::Cover& c, const SampleConfig& cfg, const std::string& name,
                        const std::function<double(const EvalPoint&)>& r);
// Chart representatives of f agree on overlaps.
Residual glue_residual(const PointForm& f, const cover::Cover& c, const SampleConfig& cfg, const std::string& name);
// Max |a - b| over the torus.
Residual difference(const PointForm& a, const PointForm& b, const cover::Cover& c, const SampleConfig& cfg,
                    const std::string& name);

// Residuals "ch_glue" (ch_total and every ch_m).
ResidualReport check_ch_glue(const ConnPtr& c, const SampleConfig& cfg);
// Residuals "dH_ch" ((d+H) ch = 0) and "graded" (d ch_m + m ch_{m-1} ^ H = 0).
ResidualReport check_ch_closed(const ConnPtr& c, const SampleConfig& cfg);
ResidualReport check_ch_additive(const ConnPtr& a, const ConnPtr& b, const SampleConfig& cfg);
// ch over lambda_{-xi} against ch ^ exp(xi).
ResidualReport check_ch_rescale(const ConnPtr& c, const calculus::MatrixForm& xi, const SampleConfig& cfg);
// ch(G0) - ch(G1) - (d+H) cs.
ResidualReport check_transgression(const ConnPtr& path, const SampleConfig& cfg, int nodes = kDefaultNodes);
// cs(gamma) - cs(alpha) - (d+H) P.
ResidualReport check_bigon(const ConnPtr& alpha, const ConnPtr& gamma, const SampleConfig& cfg,
                           int nodes = kDefaultNodes);
// "cs_gauge": cs(phi* path) - cs(path); "ch_gauge": ch(phi* G0) - ch(G0).
ResidualReport check_cs_gauge(const ConnPtr& path, const MorphismPtr& phi, const SampleConfig& cfg,
                              int nodes = kDefaultNodes);
// "stokes": d int w - int dw - (-1)^(n-1) (w|1 - w|0) for a form on X x I.
ResidualReport check_stokes(const calculus::MatrixForm& w, const cover::Cover& c, const SampleConfig& cfg,
                            int nodes = kDefaultNodes);
// "twist_invariance": ch(Gamma') = ch(Gamma) for a transported connection.
ResidualReport check_twist_invariance(const ConnPtr& c, const ConnPtr& transported, const SampleConfig& cfg);
// "pullback": ch(f* Gamma) = f* ch(Gamma), for a connection pulled back along a chart map.
ResidualReport check_pullback(const ConnPtr& c, const ConnPtr& pulled, const SampleConfig& cfg);

// Integral of a pure k-form over the coordinate k-subtorus spanned by `axes`
// through the point with coordinates `base`, by the periodic trapezoid rule.
Complex integrate_cycle(const PointForm& f, const cover::Cover& c, const std::vector<int>& axes,
                        const std::vector<double>& base, int grid);
// (1 / 2 pi i) times the integral of ch_(1) over the (x1, x2) torus.
double chern_number(const ConnPtr& c, int grid = 64);

// Point of the torus with global coordinates x, in the chart whose core holds x.
EvalPoint locate(const cover::Cover& c, const std::vector<double>& x, int order);

}  // namespace gerbecalc::chern
