#include "augspike/training.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace augspike {

void LearnerConfig::Validate(bool label_targets) const {
  if (!(eta > 0.0)) throw ParameterError("learning rate must be > 0");
  if (!(mu >= 0.0 && mu <= 1.0)) throw ParameterError("momentum must lie in [0, 1]");
  if (!(zeta >= 0.0)) throw ParameterError("coincidence margin must be >= 0");
  if (presentation_noise) presentation_noise->Validate();
  if (!label_targets) return;
  if (rule == LearningRule::kAugPsd && !desired_times) {
    throw ParameterError("AugPSD training requires desired_times");
  }
  if (rule == LearningRule::kAugTdp && !desired_count) {
    throw ParameterError("AugTDP training requires desired_count");
  }
}

NeuronConfig NeuronForRule(const NeuronConfig& neuron, LearningRule rule) {
  return neuron.WithMode(rule == LearningRule::kAugTmp
                             ? NeuronMode::kSingleSpikeShunting
                             : NeuronMode::kMultiSpike);
}

TrialTarget TargetFromLabel(const SpikePattern& pattern,
                            const LearnerConfig& learner) {
  TrialTarget t;
  const bool target = pattern.label() == learner.target_label;
  t.fire = target;
  if (target && learner.desired_times) t.desired_times = *learner.desired_times;
  if (target && learner.desired_count) t.desired_count = *learner.desired_count;
  return t;
}

namespace {

bool ErrorFromSim(const SimResult& sim, const TrialTarget& target,
                  const LearnerConfig& learner) {
  switch (learner.rule) {
    case LearningRule::kAugTmp:
      return sim.output_times.empty() == target.fire;
    case LearningRule::kAugPsd:
      return !CoincidenceMatch(target.desired_times, sim.output_times,
                               learner.zeta)
                  .all_correct;
    case LearningRule::kAugTdp:
      return sim.output_times.size() !=
             static_cast<std::size_t>(target.desired_count);
  }
  return false;
}

const SpikePattern& Viewed(const SpikePattern& pattern,
                           const LearnerConfig& learner,
                           SpikePattern& scratch) {
  if (learner.view != CoefficientView::kBinary) return pattern;
  scratch = pattern.Binarized();
  return scratch;
}

// Update given a simulation already run on the viewed pattern.
UpdateDelta UpdateFromSim(const SpikePattern& viewed,
                          std::span<const double> weights,
                          const SimResult& sim, const TrialTarget& target,
                          const LearnerConfig& learner,
                          const NeuronConfig& neuron) {
  const bool blind = learner.view == CoefficientView::kBlindRule;
  switch (learner.rule) {
    case LearningRule::kAugTmp:
      return AugTmpUpdate(viewed, sim, target.fire, neuron, learner.eta, blind);
    case LearningRule::kAugPsd:
      return AugPsdUpdate(viewed, weights, target.desired_times, neuron,
                          learner.eta, learner.zeta, blind);
    case LearningRule::kAugTdp:
      return AugTdpUpdate(viewed, weights, target.desired_count,
                          sim.output_times.size(), neuron, learner.eta,
                          learner.sts, learner.gradient, blind);
  }
  return {};
}

}  // namespace

bool IsErrorTrial(const SpikePattern& pattern, std::span<const double> weights,
                  const TrialTarget& target, const LearnerConfig& learner,
                  const NeuronConfig& neuron) {
  SpikePattern scratch;
  const auto& viewed = Viewed(pattern, learner, scratch);
  const auto cfg = NeuronForRule(neuron, learner.rule);
  return ErrorFromSim(Simulate(viewed, weights, cfg), target, learner);
}

UpdateDelta ComputeUpdate(const SpikePattern& pattern,
                          std::span<const double> weights,
                          const TrialTarget& target,
                          const LearnerConfig& learner,
                          const NeuronConfig& neuron) {
  SpikePattern scratch;
  const auto& viewed = Viewed(pattern, learner, scratch);
  const auto cfg = NeuronForRule(neuron, learner.rule);
  const auto sim = Simulate(viewed, weights, cfg);
  if (!ErrorFromSim(sim, target, learner)) {
    UpdateDelta none;
    none.dw.assign(pattern.n_afferents(), 0.0);
    return none;
  }
  return UpdateFromSim(viewed, weights, sim, target, learner, cfg);
}

OnlineLearner::OnlineLearner(std::vector<double> initial_weights,
                             LearnerConfig learner, const NeuronConfig& neuron)
    : weights_(std::move(initial_weights)),
      previous_(weights_.size(), 0.0),
      learner_(std::move(learner)),
      neuron_(NeuronForRule(neuron, learner_.rule)) {
  learner_.Validate(false);
}

TrialOutcome OnlineLearner::Present(const SpikePattern& pattern,
                                    const TrialTarget& target) {
  const auto& viewed = Viewed(pattern, learner_, scratch_);
  const auto sim = Simulate(viewed, weights_, neuron_);
  TrialOutcome outcome;
  outcome.output_spikes = sim.output_times.size();
  if (!ErrorFromSim(sim, target, learner_)) return outcome;
  outcome.error = true;
  const auto delta =
      UpdateFromSim(viewed, weights_, sim, target, learner_, neuron_);
  if (delta.skipped) {
    outcome.skipped = true;
    return outcome;
  }
  if (delta.error == TrialError::kNone) return outcome;
  auto applied = ApplyMomentum(delta.dw, previous_, learner_.mu);
  for (std::size_t i = 0; i < weights_.size(); ++i) weights_[i] += applied[i];
  previous_ = std::move(applied);
  return outcome;
}

TrainResult Train(std::span<const SpikePattern> dataset,
                  std::span<const TrialTarget> targets,
                  std::vector<double> initial_weights,
                  const LearnerConfig& learner, const NeuronConfig& neuron,
                  std::uint64_t rng_seed) {
  learner.Validate(false);
  if (dataset.empty()) throw InputError("training dataset is empty");
  if (targets.size() != dataset.size()) {
    throw InputError("one training target per pattern is required");
  }
  for (const auto& p : dataset) CheckWeights(p, initial_weights);

  OnlineLearner online(std::move(initial_weights), learner, neuron);
  Rng rng(rng_seed);
  TrainResult result;
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  SpikePattern noisy;

  for (std::size_t cycle = 0; cycle < learner.max_epochs; ++cycle) {
    const auto start = std::chrono::steady_clock::now();
    if (learner.shuffle) std::shuffle(order.begin(), order.end(), rng);
    CycleRecord rec;
    rec.cycle = cycle;
    std::map<int, std::size_t> per_class;

    for (std::size_t idx : order) {
      const SpikePattern* pattern = &dataset[idx];
      if (learner.presentation_noise) {
        noisy = ApplyNoise(*pattern, *learner.presentation_noise, rng);
        pattern = &noisy;
      }
      per_class.try_emplace(pattern->label(), 0);
      const auto outcome = online.Present(*pattern, targets[idx]);
      if (!outcome.error) continue;
      ++rec.errors;
      ++per_class[pattern->label()];
      if (outcome.skipped) ++rec.skipped;
    }

    rec.class_errors.assign(per_class.begin(), per_class.end());
    rec.wall_seconds = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    const bool clean = rec.errors == 0;
    result.history.cycles.push_back(std::move(rec));
    if (clean && !result.history.converged_cycle) {
      result.history.converged_cycle = cycle;
      if (learner.stop_on_convergence) break;
    }
  }
  result.weights = online.weights();
  return result;
}

TrainResult Train(std::span<const SpikePattern> dataset,
                  std::vector<double> initial_weights,
                  const LearnerConfig& learner, const NeuronConfig& neuron,
                  std::uint64_t rng_seed) {
  learner.Validate(true);
  std::vector<TrialTarget> targets;
  targets.reserve(dataset.size());
  for (const auto& p : dataset) targets.push_back(TargetFromLabel(p, learner));
  return Train(dataset, targets, std::move(initial_weights), learner, neuron,
               rng_seed);
}

void WriteHistory(std::ostream& os, const TrainHistory& history) {
  os << "cycle\terrors\tskipped\twall_s\tclass_errors\n";
  for (const auto& c : history.cycles) {
    os << c.cycle << '\t' << c.errors << '\t' << c.skipped << '\t'
       << std::setprecision(6) << c.wall_seconds << '\t';
    for (std::size_t k = 0; k < c.class_errors.size(); ++k) {
      if (k) os << ',';
      os << c.class_errors[k].first << ':' << c.class_errors[k].second;
    }
    os << '\n';
  }
}

void WriteWeights(std::ostream& os, std::span<const double> weights,
                  LearningRule rule, std::uint64_t seed) {
  os << "n_afferents " << weights.size() << '\n'
     << "rule " << ToString(rule) << '\n'
     << "seed " << seed << '\n';
  os << std::setprecision(17);
  for (double w : weights) os << w << '\n';
}

std::vector<double> ReadWeights(std::istream& is) {
  std::string key, rule;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  if (!(is >> key >> n) || key != "n_afferents") {
    throw FormatError("weights file: expected 'n_afferents <n>'");
  }
  if (!(is >> key >> rule) || key != "rule") {
    throw FormatError("weights file: expected 'rule <name>'");
  }
  if (!(is >> key >> seed) || key != "seed") {
    throw FormatError("weights file: expected 'seed <value>'");
  }
  std::vector<double> w(n);
  for (auto& x : w) {
    if (!(is >> x)) throw FormatError("weights file: truncated weight list");
  }
  return w;
}

}  // namespace augspike
