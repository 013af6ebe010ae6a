#pragma once

// Augmented learning rules and the spike-train metrics used to score them.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "augspike/spike_core.hpp"
#include "augspike/sts.hpp"

namespace augspike {

enum class LearningRule { kAugTmp, kAugPsd, kAugTdp };

std::string_view ToString(LearningRule rule);
LearningRule ParseLearningRule(std::string_view name);

enum class TrialError {
  kNone,
  kMissTarget,  // silent on P+
  kFalseAlarm,  // fired on P-
  kTooFew,
  kTooMany,
  kTimingMiss,
};

std::string_view ToString(TrialError error);

struct UpdateDelta {
  std::vector<double> dw;
  TrialError error = TrialError::kNone;
  // Error trial whose update could not be formed (no critical threshold or
  // a grazing crossing); dw is zero.
  bool skipped = false;
};

// Tempotron-style update anchored at the peak of the unshunted potential.
// Requires a SingleSpikeShunting neuron (ParameterError otherwise).
UpdateDelta AugTmpUpdate(const SpikePattern& pattern,
                         std::span<const double> weights, bool is_target,
                         const NeuronConfig& neuron, double eta,
                         bool coefficient_blind = false);

// Same rule given an existing simulation result, avoiding a re-simulation.
UpdateDelta AugTmpUpdate(const SpikePattern& pattern, const SimResult& sim,
                         bool is_target, const NeuronConfig& neuron, double eta,
                         bool coefficient_blind = false);

// Precise-timing update: LTP at every desired time, LTD at every actual
// output spike. With zeta > 0 a trial whose spikes all coincide with the
// desired times is reported correct and returns a zero delta; otherwise the
// raw rule is applied. Requires a MultiSpike neuron.
UpdateDelta AugPsdUpdate(const SpikePattern& pattern,
                         std::span<const double> weights,
                         std::span<const double> desired_times,
                         const NeuronConfig& neuron, double eta,
                         double zeta = 0.0, bool coefficient_blind = false);

// Spike-count update through the critical threshold nearest to the desired
// count. A failed critical-threshold search yields a skipped trial. Requires
// a MultiSpike neuron.
UpdateDelta AugTdpUpdate(const SpikePattern& pattern,
                         std::span<const double> weights, int n_desired,
                         const NeuronConfig& neuron, double eta,
                         const StsOptions& sts = {},
                         GradientForm form = GradientForm::kExact,
                         bool coefficient_blind = false);

// Same rule given the observed output spike count.
UpdateDelta AugTdpUpdate(const SpikePattern& pattern,
                         std::span<const double> weights, int n_desired,
                         std::size_t n_actual, const NeuronConfig& neuron,
                         double eta, const StsOptions& sts, GradientForm form,
                         bool coefficient_blind);

struct CoincidenceResult {
  std::size_t hits = 0;
  std::size_t misses = 0;
  std::size_t false_alarms = 0;
  bool all_correct = false;
};

// Greedy chronological matching: each desired time takes the earliest
// unmatched actual spike in [t_d - zeta, t_d + zeta].
CoincidenceResult CoincidenceMatch(std::span<const double> desired,
                                   std::span<const double> actual, double zeta);

// (1/tau) * integral of the squared difference of the two trains filtered
// with a causal exp(-t/tau) kernel, in closed form.
double SpikeDistance(std::span<const double> train_a,
                     std::span<const double> train_b, double tau);

// current + mu * previous.
std::vector<double> ApplyMomentum(std::span<const double> current,
                                  std::span<const double> previous, double mu);

}  // namespace augspike
