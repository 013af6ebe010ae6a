// Throughput of the simulation kernels: OpenMP batch vs its serial twin,
// event-driven vs the dense-grid reference, and one AugTDP update.

#include <benchmark/benchmark.h>

#include <vector>

#include "augspike/kernels.hpp"
#include "augspike/patterns.hpp"
#include "augspike/plasticity.hpp"
#include "augspike/reference.hpp"

namespace {

using namespace augspike;

struct Fixture {
  std::vector<SpikePattern> patterns;
  std::vector<double> weights;
  NeuronConfig neuron{20.0, 5.0};

  explicit Fixture(std::size_t n_patterns) {
    Rng rng(11);
    const auto scheme = CoefficientScheme::QLevels(3);
    for (std::size_t k = 0; k < n_patterns; ++k) {
      patterns.push_back(PoissonPattern(500, 4.0, 0.5, scheme, rng));
    }
    weights = GaussianWeights(500, 0.01, 0.01, rng);
  }
};

const Fixture& Shared() {
  static const Fixture f(256);
  return f;
}

void BM_SimulateBatchSerial(benchmark::State& state) {
  const auto& f = Shared();
  for (auto _ : state) {
    benchmark::DoNotOptimize(SimulateBatchSerial(f.patterns, f.weights, f.neuron));
  }
  state.SetItemsProcessed(state.iterations() * f.patterns.size());
}
BENCHMARK(BM_SimulateBatchSerial)->Unit(benchmark::kMillisecond);

void BM_SimulateBatchOpenMP(benchmark::State& state) {
  const auto& f = Shared();
  for (auto _ : state) {
    benchmark::DoNotOptimize(SimulateBatch(f.patterns, f.weights, f.neuron));
  }
  state.SetItemsProcessed(state.iterations() * f.patterns.size());
}
BENCHMARK(BM_SimulateBatchOpenMP)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_EventDriven(benchmark::State& state) {
  const auto& f = Shared();
  for (auto _ : state) {
    benchmark::DoNotOptimize(Simulate(f.patterns[0], f.weights, f.neuron));
  }
}
BENCHMARK(BM_EventDriven)->Unit(benchmark::kMicrosecond);

// Grid step in microseconds.
void BM_DenseGrid(benchmark::State& state) {
  const auto& f = Shared();
  const double dt = static_cast<double>(state.range(0)) * 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reference::SimulateDenseGrid(f.patterns[0], f.weights, f.neuron, dt));
  }
}
BENCHMARK(BM_DenseGrid)->Arg(100)->Arg(10)->Unit(benchmark::kMicrosecond);

void BM_AugTdpUpdate(benchmark::State& state) {
  const auto& f = Shared();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        AugTdpUpdate(f.patterns[0], f.weights, 12, f.neuron, 1e-4));
  }
}
BENCHMARK(BM_AugTdpUpdate)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
