// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>

#include "btf/distributions.hpp"
#include "btf/gibbs.hpp"
#include "btf/metrics.hpp"
#include "btf/simulate.hpp"

namespace {

using namespace btf;

// One sweep over the default synthetic tensor; range(0) = latent dim.
void BM_GibbsStep(benchmark::State& bench) {
  const int d = static_cast<int>(bench.range(0));
  SynthConfig config;
  config.seed = 1;
  const auto tensor = generate(config).bundle.tensor;
  const FiberIndex index(tensor);
  auto state = init_model(tensor.dims(), d, Hyperprior::defaults(d), 5.0, 1);
  for (auto _ : bench) gibbs_step(state, index);
  bench.SetItemsProcessed(bench.iterations() * static_cast<std::int64_t>(tensor.size()));
}
BENCHMARK(BM_GibbsStep)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Wishart(benchmark::State& bench) {
  const auto d = bench.range(0);
  const Matrix scale = Matrix::Identity(d, d);
  CounterRng rng(1, 0, StreamPurpose::Test, 0, 0);
  for (auto _ : bench) benchmark::DoNotOptimize(sample_wishart(scale, static_cast<double>(d), rng));
}
BENCHMARK(BM_Wishart)->Arg(4)->Arg(32);

void BM_Auroc(benchmark::State& bench) {
  const auto n = static_cast<std::size_t>(bench.range(0));
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> scores(n);
  std::vector<int> labels(n);
  for (std::size_t x = 0; x < n; ++x) {
    scores[x] = u(gen);
    labels[x] = u(gen) < 0.2;
  }
  for (auto _ : bench) benchmark::DoNotOptimize(auroc(scores, labels));
  bench.SetComplexityN(static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Auroc)->Range(1 << 8, 1 << 16)->Complexity(benchmark::oNLogN);

void BM_MannWhitneyExact(benchmark::State& bench) {
  const std::vector<double> a{0.1, 0.4, 0.35, 0.8, 0.2, 0.5}, b{0.3, 0.9, 0.7, 0.65, 0.6, 0.75};
  for (auto _ : bench) benchmark::DoNotOptimize(mann_whitney_exact_p(a, b));
}
BENCHMARK(BM_MannWhitneyExact);

}  // namespace

BENCHMARK_MAIN();
