// Serial reference vs OpenMP for the three parallel kernels. The second
// argument of every benchmark selects the flavour: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include <random>

#include "plp/circuit.hpp"
#include "plp/engine.hpp"
#include "plp/learner.hpp"
#include "plp/oracle.hpp"
#include "plp/parser.hpp"
#include "programs.hpp"

using namespace plp;

namespace {

Execution flavour(const benchmark::State& state) {
  return state.range(1) ? Execution::Parallel : Execution::Serial;
}

std::string chain(int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += "0.4::f" + std::to_string(i) + ".\n";
  s += "d0 :- f0.\n";
  for (int i = 1; i < n; ++i) {
    s += "d" + std::to_string(i) + " :- d" + std::to_string(i - 1) + ", f" + std::to_string(i) + ".\n";
    s += "d" + std::to_string(i) + " :- \\+ d" + std::to_string(i - 1) + ".\n";
  }
  return s;
}

void BM_OracleEnumerate(benchmark::State& state) {
  auto g = full_grounding(parse_program(chain(static_cast<int>(state.range(0)))));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::enumerate(g, flavour(state)));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << state.range(0)));
}
BENCHMARK(BM_OracleEnumerate)->ArgsProduct({{12, 16}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_EmIteration(benchmark::State& state) {
  auto model = parse_program(testing::smokers(true));
  auto truth = full_grounding(parse_program(testing::smokers(false)));
  std::mt19937_64 rng(1);
  Dataset d;
  for (std::int64_t m = 0; m < state.range(0); ++m) {
    d.push_back(retain_fraction(sample_world(truth, rng()), 0.4, rng()));
  }
  EmOptions o;
  o.max_iters = 5;
  o.tolerance = 0.0;
  o.exec = flavour(state);
  for (auto _ : state) benchmark::DoNotOptimize(learn_em(model, d, o));
  state.SetItemsProcessed(state.iterations() * state.range(0) * o.max_iters);
}
BENCHMARK(BM_EmIteration)->ArgsProduct({{100, 500}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_EvaluateBatch(benchmark::State& state) {
  auto p = parse_program(testing::grid3());
  auto cq = compile_query(p, parse_queries("query(path(n11,n33))."), {});
  std::mt19937_64 rng(2);
  std::bernoulli_distribution coin(0.5);
  std::vector<IndicatorAssignment> inds;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    IndicatorAssignment ind(cq.circuit.num_vars);
    for (int v = 1; v <= cq.circuit.num_vars; ++v) {
      if (coin(rng)) ind.assert_literal(coin(rng) ? v : -v);
    }
    inds.push_back(std::move(ind));
  }
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_batch(cq.circuit, inds, flavour(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvaluateBatch)->ArgsProduct({{256, 4096}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
