#pragma once

// Cycle-based training loop shared by all three rules.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "augspike/patterns.hpp"
#include "augspike/plasticity.hpp"

namespace augspike {

// How the learner treats spike coefficients.
enum class CoefficientView {
  kAugmented,
  // Rule credit uses c = 1; the neuron still integrates true coefficients.
  kBlindRule,
  // Classic learner: neuron and rule both see the binarized pattern.
  kBinary,
};

struct LearnerConfig {
  LearningRule rule = LearningRule::kAugTmp;
  double eta = 1e-4;
  double mu = 0.0;
  double zeta = 0.0;  // seconds, PSD only
  // Label-derived targets: patterns whose label equals target_label get the
  // target response (fire / desired_times / desired_count), all others the
  // null response (silent / no spikes / zero spikes).
  int target_label = 1;
  std::optional<std::vector<double>> desired_times;
  std::optional<int> desired_count;
  std::size_t max_epochs = 100;
  bool shuffle = false;
  bool stop_on_convergence = true;
  CoefficientView view = CoefficientView::kAugmented;
  GradientForm gradient = GradientForm::kExact;
  StsOptions sts;
  // Fresh noise drawn for every presentation during training.
  std::optional<NoiseSpec> presentation_noise;

  // Throws ParameterError on invalid fields. Label-derived training needs
  // desired_times (PSD) or desired_count (TDP).
  void Validate(bool label_targets) const;
};

// Desired response for one training pattern.
struct TrialTarget {
  bool fire = false;                  // AugTmp
  std::vector<double> desired_times;  // AugPSD
  int desired_count = 0;              // AugTDP
};

struct CycleRecord {
  std::size_t cycle = 0;
  std::size_t errors = 0;
  std::vector<std::pair<int, std::size_t>> class_errors;  // (label, errors)
  std::size_t skipped = 0;
  double wall_seconds = 0.0;
};

struct TrainHistory {
  std::vector<CycleRecord> cycles;
  // First cycle index (0-based) with zero errors.
  std::optional<std::size_t> converged_cycle;
};

struct TrainResult {
  std::vector<double> weights;
  TrainHistory history;
};

// Neuron mode implied by the rule (shunting for AugTmp, multi-spike else).
NeuronConfig NeuronForRule(const NeuronConfig& neuron, LearningRule rule);

TrialTarget TargetFromLabel(const SpikePattern& pattern,
                            const LearnerConfig& learner);

// Whether the neuron response to `pattern` is an error for `target`.
bool IsErrorTrial(const SpikePattern& pattern, std::span<const double> weights,
                  const TrialTarget& target, const LearnerConfig& learner,
                  const NeuronConfig& neuron);

// Update for one trial under the learner's rule and coefficient view.
UpdateDelta ComputeUpdate(const SpikePattern& pattern,
                          std::span<const double> weights,
                          const TrialTarget& target,
                          const LearnerConfig& learner,
                          const NeuronConfig& neuron);

struct TrialOutcome {
  bool error = false;
  // Error trial whose update could not be formed.
  bool skipped = false;
  std::size_t output_spikes = 0;
};

// One neuron trained online: weights plus momentum state. Each presentation
// simulates, scores and, on an error trial, applies rule + momentum.
class OnlineLearner {
 public:
  OnlineLearner(std::vector<double> initial_weights, LearnerConfig learner,
                const NeuronConfig& neuron);

  TrialOutcome Present(const SpikePattern& pattern, const TrialTarget& target);

  const std::vector<double>& weights() const { return weights_; }
  std::vector<double>& weights() { return weights_; }
  const LearnerConfig& learner() const { return learner_; }
  // Neuron in the mode implied by the rule.
  const NeuronConfig& neuron() const { return neuron_; }

 private:
  std::vector<double> weights_;
  std::vector<double> previous_;
  LearnerConfig learner_;
  NeuronConfig neuron_;
  SpikePattern scratch_;
};

// Presents the dataset once per cycle (in order unless learner.shuffle),
// applying rule + momentum on error trials only. Momentum state is touched
// only by error trials. Stops after the first error-free cycle (when
// stop_on_convergence) or after max_epochs cycles.
TrainResult Train(std::span<const SpikePattern> dataset,
                  std::span<const TrialTarget> targets,
                  std::vector<double> initial_weights,
                  const LearnerConfig& learner, const NeuronConfig& neuron,
                  std::uint64_t rng_seed);

// Targets derived from pattern labels.
TrainResult Train(std::span<const SpikePattern> dataset,
                  std::vector<double> initial_weights,
                  const LearnerConfig& learner, const NeuronConfig& neuron,
                  std::uint64_t rng_seed);

// Tab-separated, one line per cycle:
// cycle, errors, skipped, wall_s, class errors as label:count pairs.
void WriteHistory(std::ostream& os, const TrainHistory& history);

// Header (n_afferents, rule, seed) followed by one weight per line.
void WriteWeights(std::ostream& os, std::span<const double> weights,
                  LearningRule rule, std::uint64_t seed);
std::vector<double> ReadWeights(std::istream& is);

}  // namespace augspike
