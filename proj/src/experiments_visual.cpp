#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "augspike/encoders.hpp"
#include "augspike/experiments.hpp"
#include "augspike/kernels.hpp"
#include "augspike/stats.hpp"
#include "experiments_internal.hpp"

namespace augspike::experiments {

namespace {

constexpr int kClasses = 10;

struct VisualRun {
  // Per rule.
  std::vector<double> accuracy;
  std::vector<double> output_spikes;  // mean over test samples, all neurons
  double input_spikes = 0.0;          // mean over test samples
};

// Predicted class: most output spikes, ties broken by higher v_max.
int Predict(const SpikePattern& pattern,
            const std::vector<std::vector<double>>& weights,
            const NeuronConfig& neuron, std::size_t& total_spikes) {
  int best = 0;
  std::size_t best_count = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < kClasses; ++c) {
    const auto sim = Simulate(pattern, weights[c], neuron);
    const auto n = sim.output_times.size();
    total_spikes += n;
    if (n > best_count || (n == best_count && sim.v_max > best_v)) {
      best = c;
      best_count = n;
      best_v = sim.v_max;
    }
  }
  return best;
}

VisualRun RunOne(const VisualConfig& config,
                 const std::vector<LabeledImage>& images, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> order(images.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train = static_cast<std::size_t>(
      config.train_fraction * static_cast<double>(images.size()));

  const std::size_t units = images.front().pixels.size();
  const auto assignment =
      BuildAssignment(units, config.encoding_window, DeriveSeed(seed, 1));
  std::vector<SpikePattern> train, test;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& img = images[order[k]];
    auto p = Encode(NormalizedActivation(img, config.threshold_fraction),
                    assignment, img.label);
    (k < n_train ? train : test).push_back(std::move(p));
  }

  VisualRun run;
  double in_spikes = 0.0;
  for (const auto& p : test) in_spikes += static_cast<double>(p.size());
  run.input_spikes = test.empty() ? 0.0 : in_spikes / static_cast<double>(test.size());

  for (const auto rule : config.rules) {
    auto learner = detail::MakeLearner(rule, config.learn);
    learner.max_epochs = config.epochs;
    if (rule == LearningRule::kAugTdp) learner.desired_count = config.tdp_desired;
    if (rule == LearningRule::kAugPsd) {
      throw ParameterError("visual supports AugTmp and AugTDP readouts only");
    }
    std::vector<std::vector<double>> weights;
    Rng wrng(DeriveSeed(seed, 2));
    for (int c = 0; c < kClasses; ++c) {
      learner.target_label = c;
      auto w0 = detail::InitialWeights(units, config.learn, wrng);
      weights.push_back(
          Train(train, std::move(w0), learner, config.neuron.Build(),
                DeriveSeed(seed, 10 + static_cast<std::uint64_t>(c)))
              .weights);
    }
    const auto neuron = NeuronForRule(config.neuron.Build(), rule);
    std::size_t correct = 0, spikes = 0;
    for (const auto& p : test) {
      if (Predict(p, weights, neuron, spikes) == p.label()) ++correct;
    }
    const double n = std::max<double>(1.0, static_cast<double>(test.size()));
    run.accuracy.push_back(static_cast<double>(correct) / n);
    run.output_spikes.push_back(static_cast<double>(spikes) / n);
  }
  return run;
}

}  // namespace

VisualResult RunVisual(const VisualConfig& config) {
  if (config.runs == 0) throw ParameterError("visual needs runs > 0");
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    throw ParameterError("train_fraction must lie in (0, 1)");
  }
  const auto images = ReadImagesFile(config.data);
  if (images.empty()) throw InputError("image set is empty");
  for (const auto& img : images) {
    if (img.label < 0 || img.label >= kClasses) {
      throw InputError("image labels must lie in [0, 9]");
    }
  }
  std::vector<VisualRun> runs(config.runs);
  ParallelFor(config.runs, [&](std::size_t r) {
    runs[r] = RunOne(config, images, DeriveSeed(config.seed, r));
  });

  VisualResult res;
  auto& rep = res.report;
  rep.experiment = "visual";
  Table per_run{"runs", {"rule", "run", "seed", "accuracy", "output_spikes_per_sample"}, {}};
  double input_spikes = 0.0;
  for (const auto& run : runs) input_spikes += run.input_spikes;
  input_spikes /= static_cast<double>(config.runs);
  for (std::size_t k = 0; k < config.rules.size(); ++k) {
    VisualRuleResult rr;
    rr.rule = config.rules[k];
    rr.encoding_units = images.front().pixels.size();
    std::vector<double> out_spikes;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      rr.run_accuracy.push_back(runs[r].accuracy[k]);
      out_spikes.push_back(runs[r].output_spikes[k]);
      per_run.Add(std::string(ToString(rr.rule)), r,
                  std::to_string(DeriveSeed(config.seed, r)), runs[r].accuracy[k],
                  runs[r].output_spikes[k]);
    }
    rr.mean_accuracy = stats::Mean(rr.run_accuracy);
    rr.mean_spikes_per_sample = input_spikes;
    const std::string name(ToString(rr.rule));
    rep.Set(name + "_mean_accuracy", rr.mean_accuracy);
    rep.Set(name + "_output_spikes_per_sample", stats::Mean(out_spikes));
    res.rules.push_back(std::move(rr));
  }
  rep.tables = {per_run};
  rep.Set("runs", config.runs);
  rep.Set("seed", std::to_string(config.seed));
  rep.Set("images", images.size());
  rep.Set("encoding_units", images.front().pixels.size());
  rep.Set("input_spikes_per_sample", input_spikes);
  return res;
}

}  // namespace augspike::experiments
