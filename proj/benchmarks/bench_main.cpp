#include "conf/conformal.hpp"
#include "conf/minkowski2.hpp"
#include "conf/sampling.hpp"

#include <benchmark/benchmark.h>

using namespace conf;

namespace {

const std::vector<std::string> kXT{"x", "t"};

void BM_JetEval(benchmark::State& state) {
  const auto e = ScalarExpr::parse("atan(x + t)^2 * exp(-x*t) + sin(x - t)", kXT);
  const Vec p = make_vec({0.3, -0.2});
  for (auto _ : state) benchmark::DoNotOptimize(e.eval_jet(p));
}
BENCHMARK(BM_JetEval);

void BM_ConformalityGrid(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto F = build_map_from_pair(compactification(), NullRectangle(-100, 100, -100, 100));
  const auto samples = sample_box(Box(2, Interval{-50, 50}), k, 0.0, 0);
  for (auto _ : state)
    for (const auto& p : samples) benchmark::DoNotOptimize(conformality_at(F, p));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(samples.size()));
}
BENCHMARK(BM_ConformalityGrid)->Arg(17)->Arg(33);

void BM_ProbeSuite(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<std::string> comps;
  for (const auto& v : default_coordinate_names(n, 1)) comps.push_back("2*" + v + " + 1");
  const auto F = SmoothMap::parse(Signature(n, 1), comps);
  const auto samples = sample_box(Box(n, Interval{-1, 1}), 3, 0.01, 8);
  for (auto _ : state) benchmark::DoNotOptimize(probe_suite(F, samples));
}
BENCHMARK(BM_ProbeSuite)->Arg(2)->Arg(3)->Arg(4);

void BM_Factorization(benchmark::State& state) {
  const MonotonePair pair{parse_univariate("tanh(s)"), parse_univariate("s^3 + s")};
  const auto rect = NullRectangle::diamond();
  const auto F = build_map_from_pair(pair, rect);
  for (auto _ : state) benchmark::DoNotOptimize(factor_map(F, rect));
}
BENCHMARK(BM_Factorization);

}  // namespace

BENCHMARK_MAIN();
