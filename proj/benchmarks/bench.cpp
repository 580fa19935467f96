#include <benchmark/benchmark.h>

#include <cmath>
#include <limits>

#include "paceforge/allocation.hpp"
#include "paceforge/cmd_core.hpp"
#include "paceforge/instance_gen.hpp"
#include "paceforge/offline_oracle.hpp"
#include "paceforge/spectral.hpp"

using namespace paceforge;

namespace {

CanonicalParams pid_params(double eta) {
  return CanonicalParams{eta, 0.25, 0.5, 0.25, 0.9};
}

void BM_FilterStep(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  CanonicalParams p = pid_params(0.1);
  FilterState st = FilterState::zero(m);
  Vec g(m, 0.25);
  for (auto _ : state) {
    FilterResult r = filter_gradient(st, g, p);
    benchmark::DoNotOptimize(r.z.data());
    st = std::move(r.next);
  }
}
BENCHMARK(BM_FilterStep)->Arg(10)->Arg(100);

void BM_MirrorStep(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  MirrorMap map = state.range(1) == 0
                      ? make_response_map(
                            MapKind::quadratic, m,
                            std::numeric_limits<double>::infinity())
                      : make_response_map(MapKind::entropy, m, 50.0);
  Vec mu(m, 1.0), z(m, 0.2);
  for (auto _ : state) {
    Vec out = mirror_step(mu, z, 0.05, map);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_MirrorStep)->Args({10, 0})->Args({10, 1});

void BM_ToeplitzInverse(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  WeightSequence w = canonical_to_weights(pid_params(0.1), T);
  for (auto _ : state) {
    InverseSequence inv = toeplitz_inverse(w);
    benchmark::DoNotOptimize(inv.q.data());
  }
}
BENCHMARK(BM_ToeplitzInverse)->Arg(200)->Arg(1000);

void BM_RunTrial(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  LpInstanceParams inst = gen_lp_params(7, 10, 5);
  RequestStream stream = sample_lp_requests(inst, T, 8);
  TrialConfig cfg;
  cfg.params = pid_params(10.0 / std::sqrt(static_cast<double>(T)));
  cfg.target = inst.rho;
  cfg.map = make_response_map(MapKind::quadratic, 10,
                              std::numeric_limits<double>::infinity());
  cfg.mu1.assign(10, 0.0);
  for (auto _ : state) {
    TrialRecord rec = run_trial(stream.requests, cfg);
    benchmark::DoNotOptimize(rec.total_reward);
  }
}
BENCHMARK(BM_RunTrial)->Arg(1000);

void BM_DualBound(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  LpInstanceParams inst = gen_lp_params(9, 10, 5);
  RequestStream stream = sample_lp_requests(inst, T, 10);
  Vec budget(inst.rho);
  for (double& b : budget) b *= T;
  for (auto _ : state) {
    DualCertificate cert = dual_bound(stream.requests, budget, 1e-4);
    benchmark::DoNotOptimize(cert.upper);
  }
}
BENCHMARK(BM_DualBound)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
