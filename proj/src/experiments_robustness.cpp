#include <vector>

#include "augspike/experiments.hpp"
#include "augspike/kernels.hpp"
#include "experiments_internal.hpp"

namespace augspike::experiments {

namespace {

constexpr LearningRule kRules[] = {LearningRule::kAugTmp, LearningRule::kAugPsd,
                                   LearningRule::kAugTdp};

enum NoiseCase { kJitter = 0, kDeletion = 1 };

// Correct-response counts per rule and sweep level for one run.
struct RobustnessRun {
  // [rule][level]
  std::vector<std::vector<std::size_t>> jitter_correct;
  std::vector<std::vector<std::size_t>> deletion_correct;
};

LearnerConfig RuleLearner(const RobustnessConfig& config, LearningRule rule,
                          int target_label, const NoiseSpec& noise) {
  auto learner = detail::MakeLearner(rule, config.learn);
  learner.target_label = target_label;
  learner.max_epochs = config.cycles;
  learner.stop_on_convergence = false;
  learner.presentation_noise = noise;
  if (rule == LearningRule::kAugPsd) {
    learner.zeta = config.psd_zeta;
    std::vector<double> desired;
    const double step = config.window / config.desired_spikes;
    for (int k = 0; k < config.desired_spikes; ++k) desired.push_back((k + 0.5) * step);
    learner.desired_times = desired;
  }
  if (rule == LearningRule::kAugTdp) learner.desired_count = config.desired_spikes;
  return learner;
}

bool Responds(LearningRule rule, std::size_t spikes, int readout) {
  if (rule == LearningRule::kAugTmp) return spikes >= 1;
  return spikes > static_cast<std::size_t>(readout);
}

// Correct responses of each rule's neuron set at each noise level.
std::vector<std::vector<std::size_t>> Sweep(
    const RobustnessConfig& config, const std::vector<SpikePattern>& templates,
    const std::vector<std::vector<std::vector<double>>>& weights,
    NoiseCase which, std::uint64_t seed) {
  const auto& grid = which == kJitter ? config.sigma_grid : config.p_del_grid;
  std::vector<std::vector<std::size_t>> correct(
      std::size(kRules), std::vector<std::size_t>(grid.size(), 0));
  Rng rng(seed);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    NoiseSpec noise;
    if (which == kJitter) noise.sigma_jit = grid[g]; else noise.p_del = grid[g];
    for (std::size_t c = 0; c < templates.size(); ++c) {
      for (std::size_t k = 0; k < config.eval_trials; ++k) {
        // Every rule is scored on the same noisy instance.
        const auto noisy = ApplyNoise(templates[c], noise, rng);
        for (std::size_t r = 0; r < std::size(kRules); ++r) {
          const auto neuron = NeuronForRule(config.neuron.Build(), kRules[r]);
          const auto sim = Simulate(noisy, weights[r][c], neuron);
          if (Responds(kRules[r], sim.output_times.size(), config.readout_spikes)) {
            ++correct[r][g];
          }
        }
      }
    }
  }
  return correct;
}

RobustnessRun RunOne(const RobustnessConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  const auto scheme = detail::EqualSet(config.coefficients);
  std::vector<SpikePattern> templates;
  for (std::size_t c = 0; c < config.categories; ++c) {
    templates.push_back(
        PoissonPattern(config.n_afferents, config.rate, config.window, scheme, rng));
    templates.back().set_label(static_cast<int>(c));
  }
  // One initial weight vector per category neuron, shared across rules.
  std::vector<std::vector<double>> w0;
  for (std::size_t c = 0; c < config.categories; ++c) {
    w0.push_back(detail::InitialWeights(config.n_afferents, config.learn, rng));
  }

  RobustnessRun run;
  for (const NoiseCase which : {kJitter, kDeletion}) {
    NoiseSpec train_noise;
    if (which == kJitter) train_noise.sigma_jit = config.train_sigma;
    else train_noise.p_del = config.train_p_del;
    // weights[rule][category]
    std::vector<std::vector<std::vector<double>>> weights(std::size(kRules));
    for (std::size_t r = 0; r < std::size(kRules); ++r) {
      for (std::size_t c = 0; c < config.categories; ++c) {
        const auto learner =
            RuleLearner(config, kRules[r], static_cast<int>(c), train_noise);
        const auto tr = Train(templates, w0[c], learner, config.neuron.Build(),
                              DeriveSeed(seed, 100 + 10 * which + c));
        weights[r].push_back(tr.weights);
      }
    }
    auto correct = Sweep(config, templates, weights, which,
                         DeriveSeed(seed, 200 + which));
    (which == kJitter ? run.jitter_correct : run.deletion_correct) = std::move(correct);
  }
  return run;
}

}  // namespace

RobustnessResult RunRobustness(const RobustnessConfig& config) {
  if (config.runs == 0 || config.categories == 0) {
    throw ParameterError("robustness needs runs > 0 and categories > 0");
  }
  if (config.desired_spikes <= 0) {
    throw ParameterError("robustness needs desired_spikes > 0");
  }
  std::vector<RobustnessRun> runs(config.runs);
  ParallelFor(config.runs, [&](std::size_t r) {
    runs[r] = RunOne(config, DeriveSeed(config.seed, r));
  });

  const double per_level = static_cast<double>(config.runs * config.categories *
                                               config.eval_trials);
  RobustnessResult res;
  for (std::size_t r = 0; r < std::size(kRules); ++r) {
    RobustnessCurve curve;
    curve.rule = kRules[r];
    curve.jitter_accuracy.assign(config.sigma_grid.size(), 0.0);
    curve.deletion_accuracy.assign(config.p_del_grid.size(), 0.0);
    for (const auto& run : runs) {
      for (std::size_t g = 0; g < config.sigma_grid.size(); ++g) {
        curve.jitter_accuracy[g] += static_cast<double>(run.jitter_correct[r][g]);
      }
      for (std::size_t g = 0; g < config.p_del_grid.size(); ++g) {
        curve.deletion_accuracy[g] += static_cast<double>(run.deletion_correct[r][g]);
      }
    }
    for (auto& a : curve.jitter_accuracy) a /= per_level;
    for (auto& a : curve.deletion_accuracy) a /= per_level;
    res.curves.push_back(std::move(curve));
  }

  auto& rep = res.report;
  rep.experiment = "robustness";
  Table jitter{"jitter_accuracy", {"sigma_jit_s", "AugTmp", "AugPSD", "AugTDP"}, {}};
  for (std::size_t g = 0; g < config.sigma_grid.size(); ++g) {
    jitter.Add(config.sigma_grid[g], res.curves[0].jitter_accuracy[g],
               res.curves[1].jitter_accuracy[g], res.curves[2].jitter_accuracy[g]);
  }
  Table deletion{"deletion_accuracy", {"p_del", "AugTmp", "AugPSD", "AugTDP"}, {}};
  for (std::size_t g = 0; g < config.p_del_grid.size(); ++g) {
    deletion.Add(config.p_del_grid[g], res.curves[0].deletion_accuracy[g],
                 res.curves[1].deletion_accuracy[g],
                 res.curves[2].deletion_accuracy[g]);
  }
  rep.tables = {jitter, deletion};
  rep.Set("runs", config.runs);
  rep.Set("seed", std::to_string(config.seed));
  rep.Set("eval_trials_per_category", config.eval_trials);
  rep.Set("readout_spikes", config.readout_spikes);
  return res;
}

}  // namespace augspike::experiments
