// Microbenchmarks for the hot kernels: one-ring covariance synthesis,
// correlated Gaussian sampling, sample-covariance accumulation, filter
// construction and the closed-form SINR evaluation.

#include <benchmark/benchmark.h>

#include "mimocov/chanest.hpp"
#include "mimocov/channels.hpp"
#include "mimocov/covest.hpp"
#include "mimocov/se.hpp"

using namespace mimo;

namespace {

SystemParams params_m(int m) {
  SystemParams p;
  p.antennas = m;
  return p;
}

void BM_OneRingCovariance(benchmark::State& state) {
  SystemParams p = params_m(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(one_ring_covariance(1.128, 0.35, p));
}
BENCHMARK(BM_OneRingCovariance)->Arg(50)->Arg(100)->Arg(250);

void BM_GaussianSampleBlock(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  SystemParams p = params_m(m);
  GaussianSampler s(one_ring_covariance(1.128, 0.35, p));
  Rng rng(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(s.sample_block(100, rng));
}
BENCHMARK(BM_GaussianSampleBlock)->Arg(50)->Arg(100);

void BM_SampleCovariance(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Rng rng(2);
  CMatrix obs = rng.cgauss_matrix(m, 500);
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_covariance(obs));
}
BENCHMARK(BM_SampleCovariance)->Arg(50)->Arg(100);

void BM_ApproxMmseFilter(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  SystemParams p = params_m(m);
  CMatrix r = one_ring_covariance(1.128, 0.35, p);
  CMatrix q = r + one_ring_covariance(0.3, -0.7, p) +
              CMatrix::Identity(m, m);
  for (auto _ : state)
    benchmark::DoNotOptimize(approx_mmse_filter(r, q));
}
BENCHMARK(BM_ApproxMmseFilter)->Arg(50)->Arg(100);

void BM_MrcClosedFormSinr(benchmark::State& state) {
  SystemParams p;
  p.antennas = static_cast<int>(state.range(0));
  CovarianceSet set = build_covariance_set(build_geometry(p), p);
  CMatrix w = mmse_filter(set.R(0, 0, 0), set.Q(0, 0)).w;
  for (auto _ : state)
    benchmark::DoNotOptimize(mrc_sinr_closed_form(w, set, 0, 0, p.rho_ul).sinr());
}
BENCHMARK(BM_MrcClosedFormSinr)->Arg(50)->Arg(100);

void BM_FactorGridSearch(benchmark::State& state) {
  SystemParams p = params_m(50);
  p.ues_per_cell = 2;
  p.cells = 2;
  p.tau_c = 20;
  CovarianceSet set = build_covariance_set(build_geometry(p), p);
  ChannelSampler sampler(set, 0);
  std::vector<CovSamples> realizations(2);
  for (int t = 0; t < 2; ++t) {
    CovSamples& s = realizations[t];
    std::uint64_t seed = derive_seed(3, {static_cast<std::uint64_t>(t)});
    s.regular = sample_covariance(
        observe_blocks(sampler, ObservationKind::Regular, 0, 100, derive_seed(seed, {0}), p));
    s.contaminants = sample_covariance(observe_blocks(
        sampler, ObservationKind::Contaminants, 0, 10, derive_seed(seed, {1}), p));
    s.clean = sample_covariance(
        observe_blocks(sampler, ObservationKind::Clean, 0, 10, derive_seed(seed, {2}), p));
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(optimize_factors(set.R(0, 0, 0), set.Q(0, 0), Scheme::ViaQ,
                                              p.rho_tr, realizations, 0.05));
}
BENCHMARK(BM_FactorGridSearch);

}  // namespace

BENCHMARK_MAIN();
