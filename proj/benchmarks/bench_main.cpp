#include <benchmark/benchmark.h>

#include <random>

#include "gerbecalc/bundle/bundle.hpp"
#include "gerbecalc/calculus/jet.hpp"
#include "gerbecalc/calculus/matrix_form.hpp"
#include "gerbecalc/chern/chern.hpp"
#include "gerbecalc/deligne/gerbe.hpp"
#include "gerbecalc/nerve/nerve.hpp"

namespace gc = gerbecalc;

namespace {

std::shared_ptr<const gc::cover::Cover> torus(int dim) {
  return std::make_shared<const gc::cover::Cover>(gc::cover::Cover::torus(dim, 3, 0.05));
}

gc::bundle::BundleConn rank_two(int dim) {
  const auto g = gc::deligne::make_coboundary_gerbe(torus(dim), 3, gc::calculus::MatrixForm(1));
  return gc::bundle::gauge_bundle(
      gc::bundle::direct_sum(gc::bundle::make_line_bundle(g, 1), gc::bundle::make_line_bundle(g, -1)), 2);
}

void BM_JetProduct(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const auto a = gc::calculus::jet_sin(gc::calculus::Jet::variable(0.3, 0, 3, order));
  const auto b = gc::calculus::jet_exp(gc::calculus::Jet::variable(0.1, 1, 3, order));
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_JetProduct)->Arg(1)->Arg(2)->Arg(3);

void BM_ChTotal(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto e = rank_two(dim);
  const auto c = gc::bundle::perturb_connection(e.conn, 1, 0.3);
  const auto p = gc::chern::locate(e.bundle->cover(), std::vector<double>(dim, 0.37), 1);
  for (auto _ : state) benchmark::DoNotOptimize(gc::chern::ch_total(*c, p));
}
BENCHMARK(BM_ChTotal)->Arg(2)->Arg(3);

void BM_ChernSimons(benchmark::State& state) {
  const auto e = rank_two(2);
  const auto path = gc::bundle::eased_path(gc::bundle::perturb_connection(e.conn, 1, 0.3),
                                           gc::bundle::perturb_connection(e.conn, 2, 0.3));
  const auto p = gc::chern::locate(e.bundle->cover(), {0.37, 0.61}, 1);
  const int nodes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gc::chern::cs(path, p, nodes));
}
BENCHMARK(BM_ChernSimons)->Arg(4)->Arg(16);

void BM_SmithNormalForm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 gen(1);
  std::uniform_int_distribution<int> entry(-9, 9);
  gc::nerve::IntMatrix m(n, n);
  for (auto& x : m.a) x = entry(gen);
  for (auto _ : state) benchmark::DoNotOptimize(gc::nerve::smith_normal_form(m));
}
BENCHMARK(BM_SmithNormalForm)->Arg(4)->Arg(8)->Arg(16);

void BM_NerveCohomology(benchmark::State& state) {
  const auto k = gc::nerve::AbstractComplex::from_cover(*torus(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(gc::nerve::cohomology(k, 2));
}
BENCHMARK(BM_NerveCohomology)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_DDCocycle(benchmark::State& state) {
  const auto g = gc::deligne::make_coboundary_gerbe(torus(2), 5, gc::calculus::MatrixForm(1));
  for (auto _ : state) benchmark::DoNotOptimize(gc::nerve::dd_cocycle(*g));
}
BENCHMARK(BM_DDCocycle)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
