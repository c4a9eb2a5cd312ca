#include <benchmark/benchmark.h>

#include "qdamp/kernel.hpp"
#include "qdamp/slicing.hpp"
#include "qdamp/wavepacket.hpp"

namespace {

const qdamp::DampedParams kParams{0.6, 1.0};
const qdamp::BoundarySpec kBc{0.0, 1.0, 1.0};

void BM_RecursionSweep(benchmark::State& state) {
  const int n = (int)state.range(0);
  const double eps = kBc.T / n;
  const auto base = qdamp::short_time_coeffs(kParams, eps, 1.0, qdamp::SeedKind::Hyperbolic);
  for (auto _ : state) {
    qdamp::RecursionSweep sweep(base);
    for (int k = 1; k < n; ++k) sweep.advance();
    benchmark::DoNotOptimize(sweep.current());
  }
  state.SetItemsProcessed(state.iterations() * (n - 1));
}
BENCHMARK(BM_RecursionSweep)->Arg(1000)->Arg(10000);

void BM_ClosedFormAB(benchmark::State& state) {
  for (auto _ : state) {
    auto ab = qdamp::closed_form_ab(5000, kParams, 1e-4);
    benchmark::DoNotOptimize(ab);
  }
}
BENCHMARK(BM_ClosedFormAB);

void BM_DiscreteKernel(benchmark::State& state) {
  const int n = (int)state.range(0);
  for (auto _ : state) {
    auto k = qdamp::discrete_kernel(kBc, kParams, n, qdamp::SeedKind::Hyperbolic);
    benchmark::DoNotOptimize(k);
  }
}
BENCHMARK(BM_DiscreteKernel)->Arg(1000)->Arg(8000);

void BM_ClosedKernel(benchmark::State& state) {
  for (auto _ : state) {
    auto k = qdamp::closed_kernel(kBc, kParams);
    benchmark::DoNotOptimize(k);
  }
}
BENCHMARK(BM_ClosedKernel);

void BM_EvolveAnalytic(benchmark::State& state) {
  const auto pkt = qdamp::make_packet({0.5, 0.0}, 5.0, 1.0);
  for (auto _ : state) {
    auto ev = qdamp::evolve_analytic(pkt, 1.0, kParams);
    benchmark::DoNotOptimize(ev);
  }
}
BENCHMARK(BM_EvolveAnalytic);

void BM_EvolveQuadrature(benchmark::State& state) {
  const auto pkt = qdamp::make_packet({0.5, 0.0}, 5.0, 1.0);
  qdamp::SamplingGrid grid = qdamp::auto_grid(pkt, 1.0, kParams);
  grid.n_x = 201;
  for (auto _ : state) {
    auto s = qdamp::evolve_quadrature(pkt, 1.0, kParams, grid);
    benchmark::DoNotOptimize(s.psi.data());
  }
}
BENCHMARK(BM_EvolveQuadrature);

}  // namespace

BENCHMARK_MAIN();
