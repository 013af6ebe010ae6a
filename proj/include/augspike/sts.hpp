#pragma once

// Spike-threshold surface: critical thresholds and their weight gradients.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "augspike/spike_core.hpp"

namespace augspike {

struct CriticalThreshold {
  std::size_t k = 0;
  double theta_star = 0.0;
  // Tangency time of the spike that appears/vanishes at theta_star.
  double t_star = 0.0;
  // Output spikes strictly before t_star at a threshold just below
  // theta_star.
  std::vector<double> preceding_spikes;
  // Final bisection bracket: >= k spikes at lower, < k at upper.
  double lower = 0.0;
  double upper = 0.0;
};

struct StsOptions {
  int max_iterations = 200;
  double relative_tolerance = 1e-10;
  // Thresholds already known to give >= k spikes (fires_at_least) or < k
  // spikes (fires_fewer); they tighten the initial bracket.
  std::optional<double> fires_at_least;
  std::optional<double> fires_fewer;
};

// Output spike count under a MultiSpike neuron at threshold theta, counting
// no further than `cap` (0 = no cap).
std::size_t CountSpikes(const SpikePattern& pattern,
                        std::span<const double> weights, double theta,
                        const NeuronConfig& config, std::size_t cap = 0);

// Supremum threshold at which the neuron still fires >= k spikes, by
// bisection between a bracket seeded from the peak of U and halving towards
// zero. Throws NoSuchCritical when no positive threshold yields k spikes.
CriticalThreshold ComputeSts(const SpikePattern& pattern,
                             std::span<const double> weights, std::size_t k,
                             const NeuronConfig& config,
                             const StsOptions& options = {});

enum class GradientForm {
  // Total derivative: keeps the theta* dependence of the reset sum and the
  // recursive dependence of each output spike on its predecessors.
  kExact,
  // First-order form: direct dependence of each preceding output spike on
  // w_i only, no theta* self-consistency factor. Equal to kExact when the
  // critical spike has no predecessors.
  kFirstOrder,
};

constexpr double kGrazingSlope = 1e-9;  // 1/s

// d theta*_k / d w_i for every afferent. With coefficient_blind the credit
// terms use c = 1 (classic, coefficient-free rule) while the trajectory is
// the true one. Throws DegenerateCrossing when a preceding spike crosses
// with |dV/dt| < kGrazingSlope.
std::vector<double> StsGradient(const SpikePattern& pattern,
                                std::span<const double> weights,
                                const CriticalThreshold& crit,
                                const NeuronConfig& config,
                                GradientForm form = GradientForm::kExact,
                                bool coefficient_blind = false);

}  // namespace augspike
