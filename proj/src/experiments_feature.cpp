#include <algorithm>
#include <vector>

#include "augspike/experiments.hpp"
#include "augspike/kernels.hpp"
#include "augspike/stats.hpp"
#include "experiments_internal.hpp"

namespace augspike::experiments {

namespace {

struct FeatureRun {
  std::size_t cycles = 0;
  bool converged = false;
  std::vector<std::size_t> cycle_errors;
  // Per evaluated occurrence: feature id and output spike count.
  std::vector<std::pair<int, std::size_t>> responses;
  std::vector<double> background_spikes;
};

// Output spikes attributed to each occurrence: those in
// [start, start + feature_window + t_peak), cut at the next occurrence start.
std::vector<std::pair<int, std::size_t>> OccurrenceResponses(
    const FeatureTrial& trial, std::span<const double> outputs,
    double feature_window, double t_peak) {
  std::vector<std::pair<int, std::size_t>> out;
  const auto& occ = trial.occurrences;
  for (std::size_t k = 0; k < occ.size(); ++k) {
    double end = occ[k].start + feature_window + t_peak;
    if (k + 1 < occ.size()) end = std::min(end, occ[k + 1].start);
    const auto n = std::count_if(outputs.begin(), outputs.end(), [&](double t) {
      return t >= occ[k].start && t < end;
    });
    out.emplace_back(occ[k].feature, static_cast<std::size_t>(n));
  }
  return out;
}

FeatureRun RunOne(const FeatureConfig& config, std::uint64_t seed,
                  CoefficientView view) {
  Rng rng(seed);
  const auto scheme = detail::EqualSet(config.coefficients);
  const auto features = GenerateFeatures(config.task, scheme, rng);
  const auto w0 = detail::InitialWeights(config.task.n_afferents, config.learn, rng);

  auto learner = detail::MakeLearner(LearningRule::kAugTdp, config.learn);
  learner.view = view;
  OnlineLearner online(w0, learner, config.neuron.Build());

  // Training and evaluation trials come from their own streams so both
  // learners of a run see identical data.
  Rng train_rng(DeriveSeed(seed, 1));
  FeatureRun run;
  for (std::size_t cycle = 0; cycle < config.max_cycles; ++cycle) {
    std::size_t errors = 0;
    for (std::size_t k = 0; k < config.trials_per_cycle; ++k) {
      const auto trial = BuildFeatureTrial(config.task, features, scheme, train_rng);
      TrialTarget target;
      target.desired_count = DesiredCount(config.task, trial);
      if (online.Present(trial.pattern, target).error) ++errors;
    }
    run.cycles = cycle + 1;
    run.cycle_errors.push_back(errors);
    if (errors == 0) {
      run.converged = true;
      break;
    }
  }

  Rng eval_rng(DeriveSeed(seed, 2));
  const auto& neuron = online.neuron();
  for (std::size_t k = 0; k < config.eval_trials; ++k) {
    const auto trial = BuildFeatureTrial(config.task, features, scheme, eval_rng);
    const auto& pattern =
        view == CoefficientView::kBinary ? trial.pattern.Binarized() : trial.pattern;
    const auto sim = Simulate(pattern, online.weights(), neuron);
    const auto resp = OccurrenceResponses(trial, sim.output_times,
                                          config.task.feature_window,
                                          neuron.t_peak());
    run.responses.insert(run.responses.end(), resp.begin(), resp.end());
  }
  auto background = config.task;
  background.mean_occurrences = 0.0;
  for (std::size_t k = 0; k < config.eval_trials; ++k) {
    const auto trial = BuildFeatureTrial(background, features, scheme, eval_rng);
    const auto& pattern =
        view == CoefficientView::kBinary ? trial.pattern.Binarized() : trial.pattern;
    const auto sim = Simulate(pattern, online.weights(), neuron);
    run.background_spikes.push_back(static_cast<double>(sim.output_times.size()));
  }
  return run;
}

FeatureRuleStats Aggregate(const FeatureConfig& config,
                           const std::vector<FeatureRun>& runs) {
  FeatureRuleStats st;
  const auto n_features = config.task.n_features;
  std::vector<double> sum(n_features, 0.0);
  std::vector<std::size_t> count(n_features, 0);
  std::vector<double> background;
  for (const auto& run : runs) {
    std::vector<double> target_resp, distractor_resp;
    for (const auto& [f, n] : run.responses) {
      ++st.occurrences;
      const auto fi = static_cast<std::size_t>(f);
      if (static_cast<int>(n) == config.task.targets[fi]) ++st.correct;
      sum[fi] += static_cast<double>(n);
      ++count[fi];
      (config.task.targets[fi] > 0 ? target_resp : distractor_resp)
          .push_back(static_cast<double>(n));
    }
    const double t = target_resp.empty() ? 0.0 : stats::Mean(target_resp);
    const double d = distractor_resp.empty() ? 0.0 : stats::Mean(distractor_resp);
    st.run_target_minus_distractor.push_back(t - d);
    background.insert(background.end(), run.background_spikes.begin(),
                      run.background_spikes.end());
    st.cycles_trained.push_back(run.cycles);
  }
  st.accuracy = st.occurrences
                    ? static_cast<double>(st.correct) /
                          static_cast<double>(st.occurrences)
                    : 0.0;
  for (std::size_t f = 0; f < n_features; ++f) {
    st.mean_response.push_back(count[f] ? sum[f] / static_cast<double>(count[f])
                                        : 0.0);
  }
  st.difference_p = stats::OneSampleT(st.run_target_minus_distractor).p;
  st.median_background_spikes = background.empty() ? 0.0 : stats::Median(background);
  return st;
}

void AddRule(Report& rep, Table& resp, Table& per_run, const std::string& name,
             const FeatureRuleStats& st, const std::vector<FeatureRun>& runs,
             std::uint64_t seed) {
  for (std::size_t f = 0; f < st.mean_response.size(); ++f) {
    resp.Add(name, f, st.mean_response[f]);
  }
  for (std::size_t r = 0; r < runs.size(); ++r) {
    per_run.Add(name, r, std::to_string(DeriveSeed(seed, r)), runs[r].cycles,
                runs[r].converged ? 1 : 0, st.run_target_minus_distractor[r]);
  }
  rep.Set(name + "_occurrence_accuracy", st.accuracy);
  rep.Set(name + "_occurrences", st.occurrences);
  rep.Set(name + "_target_minus_distractor_p", st.difference_p);
  rep.Set(name + "_median_background_spikes", st.median_background_spikes);
  std::vector<double> cycles(st.cycles_trained.begin(), st.cycles_trained.end());
  rep.Set(name + "_median_cycles", stats::Median(cycles));
}

}  // namespace

FeatureResult RunFeatureDetect(const FeatureConfig& config) {
  if (config.runs == 0) throw ParameterError("feature_detect needs runs > 0");
  config.task.Validate();
  if (config.task.targets.size() != config.task.n_features) {
    throw ParameterError("one target count per feature is required");
  }
  std::vector<FeatureRun> aug(config.runs), abl;
  ParallelFor(config.runs, [&](std::size_t r) {
    aug[r] = RunOne(config, DeriveSeed(config.seed, r), CoefficientView::kAugmented);
  });
  if (config.run_ablation) {
    abl.resize(config.runs);
    ParallelFor(config.runs, [&](std::size_t r) {
      abl[r] = RunOne(config, DeriveSeed(config.seed, r), config.ablation);
    });
  }

  FeatureResult res;
  res.aug = Aggregate(config, aug);
  if (config.run_ablation) res.ablation = Aggregate(config, abl);

  auto& rep = res.report;
  rep.experiment = "feature_detect";
  Table resp{"feature_response", {"rule", "feature", "mean_spikes"}, {}};
  Table per_run{"runs",
                {"rule", "run", "seed", "cycles", "converged",
                 "target_minus_distractor"},
                {}};
  rep.Set("runs", config.runs);
  rep.Set("seed", std::to_string(config.seed));
  AddRule(rep, resp, per_run, "aug", res.aug, aug, config.seed);
  if (res.ablation) {
    rep.Set("ablation_view", detail::ViewName(config.ablation));
    AddRule(rep, resp, per_run, "ablation", *res.ablation, abl, config.seed);
  }
  // Mean error-trial fraction per cycle; a run that stopped early counts as
  // error-free afterwards.
  Table curve{"learning_curve", {"cycle", "aug_error"}, {}};
  if (res.ablation) curve.columns.push_back("ablation_error");
  const double denom =
      static_cast<double>(config.runs * config.trials_per_cycle);
  for (std::size_t c = 0; c < config.max_cycles; ++c) {
    auto mean_at = [&](const std::vector<FeatureRun>& runs) {
      double e = 0.0;
      for (const auto& r : runs) {
        if (c < r.cycle_errors.size()) e += static_cast<double>(r.cycle_errors[c]);
      }
      return e / denom;
    };
    if (res.ablation) {
      curve.Add(c, mean_at(aug), mean_at(abl));
    } else {
      curve.Add(c, mean_at(aug));
    }
  }
  rep.tables = {resp, per_run, curve};
  return res;
}

}  // namespace augspike::experiments
