#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "gerbecalc/cli/manifest.hpp"
#include "gerbecalc/cli/runner.hpp"
#include "gerbecalc/nerve/nerve.hpp"

namespace gc = gerbecalc;

namespace {

int run_manifest(const std::string& path, int nodes, int grid, const std::string& report_path, bool timing) {
  gc::cli::Manifest m;
  try {
    m = gc::cli::load_manifest(path);
  } catch (const std::exception& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 2;
  }
  gc::cli::RunOptions opt;
  opt.quad_nodes = nodes;
  if (grid > 0) opt.grid_override = grid;
  const gc::cli::Report r = gc::cli::run(m, opt);
  const std::string text = gc::cli::format_report(r, timing);
  std::cout << text;
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) {
      std::cerr << "cannot write " << report_path << "\n";
      return 2;
    }
    out << text;
  }
  return r.ok() ? 0 : 1;
}

int run_cohomology(const std::string& path, int q) {
  try {
    const auto k = gc::nerve::AbstractComplex::load(path);
    const auto h = gc::nerve::cohomology(k, q);
    std::cout << "H^" << q << " betti=" << h.betti << " torsion=";
    if (h.torsion.empty()) std::cout << "none";
    for (std::size_t i = 0; i < h.torsion.size(); ++i) std::cout << (i ? "," : "") << h.torsion[i];
    std::cout << "\n";
  } catch (const std::exception& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification engine for even twisted differential K-theory"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Execute the checks of a scenario manifest");
  std::string manifest, report;
  int nodes = 16, grid = 0;
  bool timing = false;
  run->add_option("manifest", manifest, "Manifest file")->required()->check(CLI::ExistingFile);
  run->add_option("--quad-nodes", nodes, "Gauss-Legendre nodes per fiber")->check(CLI::Range(1, 256));
  run->add_option("--grid-override", grid, "Replace the manifest grid size")->check(CLI::Range(1, 64));
  run->add_option("--report", report, "Also write the report here");
  run->add_flag("--timing", timing, "Append wall time to each check line");

  auto* coh = app.add_subcommand("cohomology", "Integer cohomology of a simplicial complex file");
  std::string complex;
  int q = 0;
  coh->add_option("complex", complex, "Complex file (one simplex per line)")->required()->check(CLI::ExistingFile);
  coh->add_option("--dim", q, "Cohomological degree")->required()->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);
  if (*run) return run_manifest(manifest, nodes, grid, report, timing);
  return run_cohomology(complex, q);
}
