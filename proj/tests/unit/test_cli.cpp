#include <gtest/gtest.h>

#include "gerbecalc/cli/manifest.hpp"
#include "gerbecalc/cli/runner.hpp"

using namespace gerbecalc::cli;

namespace {

const char* kMinimal = R"(scenario "minimal"
manifold torus dim=2 grid=3 margin=0.05
gerbe g = trivial
check validate_gerbe g
)";

const char* kRich = R"(# comment line
scenario "rich example"
manifold torus dim=2 grid=3 margin=0.05
samples count=40 seed=9
tolerance pointwise=1e-9 quadrature=2e-6
gerbe g = coboundary seed=3 beta="(0.2*sin(2*pi*x1)) dx1^dx2"
twist1 a = random seed=4
bundle L on g = line k=1
bundle M on g = line k=-1
bundle S on g = sum L M
connection c on S = standard
connection d on S = perturb c seed=2 amp=0.2
path p = eased c d
form w deg=1 = "(0.1*sin(2*pi*x2)) dx1"
check ch_glue d
check transgression p coarse=4
check chern_number c k=0
check cohomology rp2 q=2 betti=0 torsion=2
)";

int error_line(const std::string& text) {
  try {
    parse_manifest(text);
  } catch (const ManifestError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Manifest, MinimalParses) {
  const Manifest m = parse_manifest(kMinimal);
  EXPECT_EQ(m.scenario, "minimal");
  EXPECT_EQ(m.dim, 2);
  ASSERT_EQ(m.checks.size(), 1u);
  EXPECT_EQ(m.checks[0].id, "validate_gerbe");
}

TEST(Manifest, OptionsAndTolerances) {
  const Manifest m = parse_manifest(kRich);
  EXPECT_EQ(m.samples, 40);
  EXPECT_EQ(m.seed, 9u);
  EXPECT_DOUBLE_EQ(m.tol.pointwise, 1e-9);
  EXPECT_DOUBLE_EQ(m.tol.quadrature, 2e-6);
  EXPECT_DOUBLE_EQ(m.tol.closed, 1e-7);
  ASSERT_NE(m.find("g"), nullptr);
  EXPECT_EQ(m.find("g")->options.at("beta"), "(0.2*sin(2*pi*x1)) dx1^dx2");
}

TEST(Manifest, PrintParseRoundTripIsStable) {
  for (const char* text : {kMinimal, kRich}) {
    const std::string once = print_manifest(parse_manifest(text));
    const std::string twice = print_manifest(parse_manifest(once));
    EXPECT_EQ(once, twice);
  }
}

TEST(Manifest, ErrorsNameTheLine) {
  EXPECT_EQ(error_line("scenario \"x\"\nmanifold torus dim=2 grid=3 margin=0.05\ncheck frobnicate\n"), 3);
  EXPECT_EQ(error_line("manifold torus dim=2 grid=3 margin=0.05\ngerbe g = trivial\ngerbe g = trivial\n"), 3);
  EXPECT_EQ(error_line("manifold torus dim=2 grid=3 margin=0.05\nbundle L on h = line k=1\n"), 2);
  EXPECT_EQ(error_line("manifold torus dim=2 grid=3 margin=0.05\ngerbe g = trivial\ncheck validate_bundle g\n"), 3);
  EXPECT_EQ(error_line("manifold torus dim=2 grid=3 margin=0.05\nform w deg=1 = \"(1) dx1\n"), 2);
  EXPECT_EQ(error_line("manifold torus dim=2 grid=3 margin=0.05\ngerbe g = trivial extra=1\n"), 2);
  EXPECT_EQ(error_line("gerbe g = trivial\n"), 1);
}

TEST(Manifest, CheckNamesAreComplete) {
  EXPECT_EQ(check_names().size(), 18u);
}

TEST(Runner, EmptyCheckListPasses) {
  const Report r = run(parse_manifest("scenario \"empty\"\nmanifold torus dim=2 grid=3 margin=0.05\n"), {});
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(format_report(r), "SUMMARY pass=0 fail=0\n");
}

TEST(Runner, ReportIsDeterministic) {
  const Manifest m = parse_manifest(kRich);
  const std::string a = format_report(run(m, {})), b = format_report(run(m, {}));
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("CHECK ch_glue PASS max_residual="), std::string::npos);
  EXPECT_NE(a.find("SUMMARY pass=4 fail=0"), std::string::npos);
}

TEST(Runner, EvaluationErrorsBecomeFailures) {
  const Manifest m = parse_manifest(
      "manifold torus dim=2 grid=3 margin=0.05\ngerbe g = trivial\nbundle L on g = line k=1\n"
      "connection c on L = standard\ncheck chern_number c k=2\ncheck ch_rescale c xi=\"(1) dx1\"\n");
  const Report r = run(m, {});
  ASSERT_EQ(r.checks.size(), 2u);
  EXPECT_FALSE(r.checks[0].pass);
  EXPECT_FALSE(r.checks[1].pass);
  EXPECT_FALSE(r.checks[1].message.empty());
  EXPECT_EQ(r.failed(), 2);
}

TEST(Runner, GridOverrideChangesTheCover) {
  const Manifest m = parse_manifest(kMinimal);
  RunOptions opt;
  opt.grid_override = 4;
  const Report a = run(m, {}), b = run(m, opt);
  EXPECT_TRUE(b.ok());
  EXPECT_NE(a.checks[0].points, b.checks[0].points);
}
