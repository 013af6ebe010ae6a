#include "augspike/kernels.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace augspike {

std::vector<SimResult> SimulateBatch(std::span<const SpikePattern> patterns,
                                     std::span<const double> weights,
                                     const NeuronConfig& config) {
  std::vector<SimResult> out(patterns.size());
  ParallelFor(patterns.size(), [&](std::size_t i) {
    out[i] = Simulate(patterns[i], weights, config);
  });
  return out;
}

std::vector<SimResult> SimulateBatchSerial(
    std::span<const SpikePattern> patterns, std::span<const double> weights,
    const NeuronConfig& config) {
  std::vector<SimResult> out;
  out.reserve(patterns.size());
  for (const auto& p : patterns) out.push_back(Simulate(p, weights, config));
  return out;
}

std::vector<double> SampleTrace(const SpikePattern& pattern,
                                std::span<const double> weights,
                                std::span<const double> times,
                                std::span<const double> output_times,
                                const NeuronConfig& config) {
  CheckWeights(pattern, weights);
  std::vector<double> out(times.size());
  const auto n = static_cast<long>(times.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) {
    out[k] = ComposedPotential(pattern, weights, times[k], output_times,
                               config.threshold(), config);
  }
  return out;
}

std::vector<double> SampleTraceSerial(const SpikePattern& pattern,
                                      std::span<const double> weights,
                                      std::span<const double> times,
                                      std::span<const double> output_times,
                                      const NeuronConfig& config) {
  CheckWeights(pattern, weights);
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    out.push_back(ComposedPotential(pattern, weights, t, output_times,
                                    config.threshold(), config));
  }
  return out;
}

void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

int HardwareThreads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace augspike
