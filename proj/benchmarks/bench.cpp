// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "odcsgd/algorithm.hpp"
#include "odcsgd/bounds.hpp"
#include "odcsgd/config.hpp"
#include "odcsgd/noise.hpp"
#include "odcsgd/random.hpp"
#include "odcsgd/regret.hpp"

using namespace odcsgd;

static void BM_Philox(benchmark::State& state) {
  PhiloxCounter counter{0, 0, 0, 0};
  for (auto _ : state) {
    counter = philox4x32_10(counter, {1, 2});
    benchmark::DoNotOptimize(counter);
  }
}
BENCHMARK(BM_Philox);

static void BM_SampleT2(benchmark::State& state) {
  RandomStream stream(1, 0, 0, StreamDomain::monte_carlo);
  for (auto _ : state) benchmark::DoNotOptimize(sample_t2(stream));
}
BENCHMARK(BM_SampleT2);

static void BM_Step(benchmark::State& state) {
  RunConfig config = default_config();
  config.horizon = 100;
  const SimulationSpec spec = build_simulation(config, 1);
  const GradientOracle oracle(*spec.problem, spec.noise);
  const StreamFamily streams{1, StreamDomain::gradient_noise};
  SwarmState swarm{initial_states(6, 2, spec.init, 1), 1};
  for (auto _ : state) {
    auto result = odcsgd_step(swarm, spec.graph.at(swarm.t), oracle, spec.step(swarm.t), spec.clip(swarm.t), streams);
    benchmark::DoNotOptimize(result.next.states.data());
  }
}
BENCHMARK(BM_Step);

static void BM_Run(benchmark::State& state) {
  RunConfig config = default_config();
  config.horizon = static_cast<int>(state.range(0));
  const SimulationSpec spec = build_simulation(config, 1);
  for (auto _ : state) {
    const RunTrace trace = run(spec);
    benchmark::DoNotOptimize(trace.states.back().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Run)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

static void BM_LedgerAndChecks(benchmark::State& state) {
  RunConfig config = default_config();
  config.horizon = 5000;
  const SimulationSpec spec = build_simulation(config, 1);
  const RunTrace trace = run(spec);
  for (auto _ : state) {
    const RegretLedger ledger = compute_ledger(trace, *spec.problem);
    const BoundContext ctx =
        make_bound_context(trace, *spec.problem, spec.graph, spec.noise, spec.step, spec.clip, config.delta);
    benchmark::DoNotOptimize(check_lemma2(trace, ctx).violations);
    benchmark::DoNotOptimize(check_lemma3(trace, ctx).violations);
    benchmark::DoNotOptimize(theorem1_rhs(ctx, ledger.c_path));
  }
}
BENCHMARK(BM_LedgerAndChecks)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
