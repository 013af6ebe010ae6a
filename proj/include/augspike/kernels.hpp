#pragma once

// Data-parallel kernels. Each has a serial twin with identical results that
// the tests compare against and the benchmarks time.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "augspike/spike_core.hpp"

namespace augspike {

std::vector<SimResult> SimulateBatch(std::span<const SpikePattern> patterns,
                                     std::span<const double> weights,
                                     const NeuronConfig& config);
std::vector<SimResult> SimulateBatchSerial(
    std::span<const SpikePattern> patterns, std::span<const double> weights,
    const NeuronConfig& config);

// Composed potential V(t) at each requested time.
std::vector<double> SampleTrace(const SpikePattern& pattern,
                                std::span<const double> weights,
                                std::span<const double> times,
                                std::span<const double> output_times,
                                const NeuronConfig& config);
std::vector<double> SampleTraceSerial(const SpikePattern& pattern,
                                      std::span<const double> weights,
                                      std::span<const double> times,
                                      std::span<const double> output_times,
                                      const NeuronConfig& config);

// Runs body(i) for i in [0, n) across OpenMP threads with dynamic
// scheduling. Bodies must write only to slot i of pre-sized outputs.
// Exceptions are captured and the first one (by index) is rethrown.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& body);

int HardwareThreads();

}  // namespace augspike
