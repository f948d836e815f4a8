#include <benchmark/benchmark.h>

#include "kge/divergences.hpp"
#include "kge/kernels.hpp"
#include "kge/spectral.hpp"
#include "kge/synth.hpp"
#include "kge/testing.hpp"

namespace {

kge::Sample draw(int n, std::uint64_t seed) {
  return kge::generate(kge::UniformCube{2, 1.0}, n, seed);
}

const kge::KernelSpec kKernel = kge::RbfKernel{1.0};

void BM_Gram(benchmark::State& state) {
  kge::Sample X = draw(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    kge::GramMatrix K = kge::gram(kKernel, X, X);
    benchmark::DoNotOptimize(K.values.data());
  }
}
BENCHMARK(BM_Gram)->Arg(100)->Arg(400)->Arg(1000);

void BM_CovSpectrum(benchmark::State& state) {
  kge::Sample X = draw(static_cast<int>(state.range(0)), 2);
  kge::CovEmbedding S = kge::cov_embed(kKernel, X);
  for (auto _ : state) {
    kge::SpectralBasis basis = kge::cov_spectrum(S, 20);
    benchmark::DoNotOptimize(basis.eigenvalues.data());
  }
}
BENCHMARK(BM_CovSpectrum)->Arg(100)->Arg(400)->Arg(1000);

void BM_MmdSquared(benchmark::State& state) {
  kge::Sample X = draw(static_cast<int>(state.range(0)), 3);
  kge::Sample Y = draw(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(kge::mmd_squared(kKernel, X, Y));
}
BENCHMARK(BM_MmdSquared)->Arg(100)->Arg(400)->Arg(1000);

void BM_ProjectedKlExact(benchmark::State& state) {
  kge::Sample X = draw(static_cast<int>(state.range(0)), 5);
  kge::Sample Y = draw(static_cast<int>(state.range(0)), 6);
  for (auto _ : state) {
    kge::DivergenceCurve curve =
        kge::divergence_curve(kKernel, X, Y, {20}, {kge::KLVariant::Form::Exact, false});
    benchmark::DoNotOptimize(curve.values.data());
  }
}
BENCHMARK(BM_ProjectedKlExact)->Arg(100)->Arg(400);

void BM_MedianBandwidth(benchmark::State& state) {
  kge::Sample X = draw(static_cast<int>(state.range(0)), 7);
  kge::Sample Y = draw(static_cast<int>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(kge::median_bandwidth(X, Y));
}
BENCHMARK(BM_MedianBandwidth)->Arg(500)->Arg(2000);

void BM_PermutationTest(benchmark::State& state) {
  kge::Sample X = draw(100, 9);
  kge::Sample Y = draw(100, 10);
  kge::TestConfig cfg;
  cfg.statistic = state.range(0) == 0 ? kge::Statistic::Mmd : kge::Statistic::KlExact;
  cfg.kernel = kKernel;
  cfg.truncation = 10;
  cfg.permutations = 99;
  for (auto _ : state) {
    kge::TestResult r = kge::permutation_test(cfg, X, Y);
    benchmark::DoNotOptimize(r.p_value);
  }
}
BENCHMARK(BM_PermutationTest)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
