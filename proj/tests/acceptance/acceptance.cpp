// Acceptance suite: one line per criterion. Scenario manifests are read from
// the directory given as the first argument.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gerbecalc/bundle/bundle.hpp"
#include "gerbecalc/calculus/matrix_form.hpp"
#include "gerbecalc/chern/chern.hpp"
#include "gerbecalc/cli/manifest.hpp"
#include "gerbecalc/cli/runner.hpp"
#include "gerbecalc/deligne/gerbe.hpp"
#include "gerbecalc/nerve/nerve.hpp"
#include "support/snf_oracle.hpp"

namespace gc = gerbecalc;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

fs::path g_dir;

// Runs a scenario; every check must PASS (or every check must FAIL).
double scenario(Verdict& v, const std::string& file, bool expect_fail = false) {
  gc::cli::Report r;
  try {
    r = gc::cli::run(gc::cli::load_manifest((g_dir / file).string()), {});
  } catch (const std::exception& e) {
    v.require(false, file + ": " + e.what());
    return 0;
  }
  double worst = 0;
  for (const auto& c : r.checks) {
    if (c.pass == expect_fail)
      v.require(false, file + ": " + c.name + (c.pass ? " passed" : " failed") + (c.message.empty() ? "" : " (" + c.message + ")"));
    if (c.pass) worst = std::max(worst, c.max_residual);
  }
  v.require(!r.checks.empty(), file + ": no checks");
  return worst;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::shared_ptr<const gc::cover::Cover> torus(int dim) {
  return std::make_shared<const gc::cover::Cover>(gc::cover::Cover::torus(dim, 3, 0.05));
}

Verdict gerbe_axioms() {
  Verdict v;
  const double w = std::max(scenario(v, "gerbe_axioms_t2.manifest"), scenario(v, "gerbe_axioms_t3.manifest"));
  // Sample counts per simplex class, read from the residual report.
  gc::SampleConfig cfg;
  cfg.per_class = 200;
  for (int dim : {2, 3}) {
    const auto g = gc::deligne::make_coboundary_gerbe(torus(dim), 1, gc::calculus::MatrixForm(1));
    for (const auto& r : gc::deligne::validate_gerbe(*g, cfg)) {
      v.require(r.points >= 200, r.name + " sampled at " + std::to_string(r.points) + " points");
      v.require(r.max <= 1e-8, r.name + " residual " + fmt("%.3g", r.max));
    }
  }
  v.detail = v.pass ? "max residual " + fmt("%.3g", w) : v.detail;
  return v;
}

Verdict gluing() {
  Verdict v;
  const double w = std::max(scenario(v, "chern_gluing_t2.manifest"), scenario(v, "chern_gluing_t3.manifest"));
  if (v.pass) v.detail = "max residual " + fmt("%.3g", w);
  return v;
}

Verdict chern_numbers() {
  Verdict v;
  const double w = scenario(v, "chern_numbers.manifest");
  // Oracle: the standard line connection has curvature 2 pi i k dx1^dx2, so
  // ch_1 is that constant at every point and its normalised integral is k.
  const auto g = gc::deligne::make_trivial_gerbe(torus(2));
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double err = 0;
  for (int k = -2; k <= 2; ++k) {
    const auto l = gc::bundle::make_line_bundle(g, k);
    for (int i = 0; i < 50; ++i) {
      const auto p = gc::chern::locate(*g->cover, {u(gen), u(gen)}, 0);
      const auto c = gc::chern::ch_m(*l.conn, p, 1).coeff(0b11).value();
      err = std::max(err, std::abs(c - gc::calculus::Complex(0.0, 2 * kPi * k)));
    }
  }
  v.require(err <= 1e-8, "curvature oracle off by " + fmt("%.3g", err));
  if (v.pass) v.detail = "max |k - c1| " + fmt("%.3g", w) + ", curvature oracle " + fmt("%.3g", err);
  return v;
}

Verdict rescaling() {
  Verdict v;
  const double w = std::max(scenario(v, "rescaling_t2.manifest"), scenario(v, "rescaling_t3.manifest"));
  if (v.pass) v.detail = "max residual " + fmt("%.3g", w);
  return v;
}

Verdict transgression() {
  Verdict v;
  const double w = std::max(scenario(v, "transgression.manifest"), scenario(v, "transgression_t3.manifest"));
  if (v.pass) v.detail = "max residual " + fmt("%.3g", w) + " at 16 nodes, ratio to 4 nodes >= 1e3";
  return v;
}

Verdict bigon() {
  Verdict v;
  const double w = scenario(v, "bigon.manifest");
  if (v.pass) v.detail = "max residual " + fmt("%.3g", w);
  return v;
}

Verdict gauge() {
  Verdict v;
  const double w = scenario(v, "gauge.manifest");
  if (v.pass) v.detail = "max residual " + fmt("%.3g", w);
  return v;
}

Verdict odd_chern() {
  Verdict v;
  const double w = std::max(scenario(v, "odd_chern.manifest"), scenario(v, "odd_chern_t3.manifest"));
  // Oracle: for Gamma = 0 and phi = exp(2 pi i x1) the path is t 2 pi i dx1,
  // ch_1 = 2 pi i dt^dx1, and integrating dt out last gives -2 pi i dx1.
  const auto c = torus(2);
  const auto e = gc::bundle::make_trivial_bundle(gc::deligne::make_trivial_gerbe(c), 1);
  auto phi = std::make_shared<gc::bundle::BundleMorphism>();
  phi->cover = c;
  phi->rank = 1;
  phi->phi = [](int, const gc::calculus::EvalPoint& p) {
    gc::calculus::JetMatrix m(1, p.nvars(), p.order);
    m(0, 0) = gc::calculus::jet_exp(p.var_jet(0) * gc::calculus::Complex(0.0, 2 * kPi));
    return m;
  };
  const auto ch = gc::chern::odd_chern_form(e.conn, phi);
  const auto p = gc::chern::locate(*c, {0.3, 0.6}, 0);
  const auto pointwise = ch(p).coeff(0b01).value();
  const auto integral = gc::chern::integrate_cycle(ch, *c, {0}, {0.0, 0.6}, 64) / gc::calculus::Complex(0.0, 2 * kPi);
  v.require(std::abs(pointwise - gc::calculus::Complex(0.0, -2 * kPi)) <= 1e-10, "pointwise odd Ch differs from -2 pi i dx1");
  v.require(std::abs(integral + 1.0) <= 1e-6, "raw integral " + fmt("%.17g", integral.real()));
  if (v.pass) v.detail = "winding " + fmt("%.15g", -integral.real()) + ", max residual " + fmt("%.3g", w);
  return v;
}

Verdict hexagon() {
  Verdict v;
  const double w = std::max(scenario(v, "hexagon.manifest"), scenario(v, "hexagon_t3.manifest"));
  scenario(v, "defect_hexagon.manifest", true);
  if (v.pass) v.detail = "max residual " + fmt("%.3g", w) + ", defect scenario fails";
  return v;
}

Verdict twist_compat() {
  Verdict v;
  const double w = std::max(scenario(v, "twist_compat.manifest"), scenario(v, "twist_compat_t3.manifest"));
  if (v.pass) v.detail = "max residual " + fmt("%.3g", w);
  return v;
}

Verdict cohomology() {
  Verdict v;
  scenario(v, "cohomology.manifest");
  std::mt19937_64 gen(2024);
  int ok = 0;
  for (int i = 0; i < 100; ++i) {
    const std::string why = gc::oracle::snf_defect(gc::oracle::random_matrix(gen));
    v.require(why.empty(), "random matrix " + std::to_string(i) + ": " + why);
    ok += why.empty();
  }
  if (v.pass) v.detail = "nerve and RP2 cohomology as expected, " + std::to_string(ok) + "/100 SNF reconstructions";
  return v;
}

Verdict dd_class() {
  Verdict v;
  const double w = std::max(scenario(v, "dd_class_t2.manifest"), scenario(v, "dd_class_t3.manifest"));
  if (v.pass) v.detail = "max distance to integers " + fmt("%.3g", w);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  g_dir = argc > 1 ? fs::path(argv[1]) : fs::path("scenarios");
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"gerbe axioms", gerbe_axioms},
      {"gluing and closedness", gluing},
      {"chern numbers", chern_numbers},
      {"rescaling", rescaling},
      {"transgression", transgression},
      {"bigon exactness", bigon},
      {"gauge invariance", gauge},
      {"odd chern winding", odd_chern},
      {"hexagon suite", hexagon},
      {"twist compatibility", twist_compat},
      {"integer cohomology", cohomology},
      {"dd extraction", dd_class},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !v.pass;
    std::printf("criterion %2zu %-22s %s  %s  [%.1fs]\n", i + 1, criteria[i].first.c_str(), v.pass ? "PASS" : "FAIL",
                v.detail.c_str(), s);
    std::fflush(stdout);
  }
  std::printf("acceptance: %zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
