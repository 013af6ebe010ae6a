#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "augspike/experiments.hpp"
#include "augspike/kernels.hpp"
#include "augspike/stats.hpp"
#include "experiments_internal.hpp"

namespace augspike::experiments {

namespace {

struct PsdSetup {
  SpikePattern pattern;
  std::vector<double> w0;
};

void CheckPsdConfig(const PsdConfig& config) {
  if (config.runs == 0) throw ParameterError("psd needs runs > 0");
  if (config.desired.empty()) throw ParameterError("psd needs desired times");
  for (double t : config.desired) {
    if (!(t > 0.0 && t <= config.window)) {
      throw ParameterError("desired times must lie in (0, window]");
    }
  }
}

PsdSetup Setup(const PsdConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  const auto scheme = CoefficientScheme::RegionMap(config.regions);
  scheme.Validate(config.window);
  PsdSetup s;
  s.pattern =
      RegionCoefficientPattern(config.n_afferents, config.window, scheme, rng);
  s.w0 = detail::InitialWeights(config.n_afferents, config.learn, rng);
  return s;
}

LearnerConfig PsdLearner(const PsdConfig& config, CoefficientView view) {
  auto learner = detail::MakeLearner(LearningRule::kAugPsd, config.learn);
  learner.zeta = config.zeta;
  learner.max_epochs = config.max_epochs;
  learner.view = view;
  return learner;
}

TrainResult TrainPsd(const PsdConfig& config, const PsdSetup& s,
                     CoefficientView view, std::uint64_t seed) {
  TrialTarget target;
  target.desired_times = config.desired;
  const std::vector<SpikePattern> data{s.pattern};
  const std::vector<TrialTarget> targets{target};
  return Train(data, targets, s.w0, PsdLearner(config, view),
               config.neuron.Build(), seed);
}

// Mean of max(w, 0) over afferents whose spike lies in [t_d - width, t_d).
double CausalMean(const SpikePattern& pattern, std::span<const double> w,
                  double t_d, double width) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& s : pattern.spikes()) {
    if (s.time >= t_d - width && s.time < t_d) {
      sum += std::max(w[s.afferent], 0.0);
      ++n;
    }
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

}  // namespace

PsdTimingResult RunPsdTiming(const PsdConfig& config) {
  CheckPsdConfig(config);
  struct Run {
    std::optional<std::size_t> epoch;
    bool matched = false;
    std::vector<double> final_output;
  };
  std::vector<Run> runs(config.runs);
  ParallelFor(config.runs, [&](std::size_t r) {
    const auto seed = DeriveSeed(config.seed, r);
    const auto s = Setup(config, seed);
    const auto tr = TrainPsd(config, s, CoefficientView::kAugmented, seed);
    const auto sim = Simulate(s.pattern, tr.weights,
                              config.neuron.Build().WithMode(NeuronMode::kMultiSpike));
    runs[r].epoch = tr.history.converged_cycle;
    runs[r].final_output = sim.output_times;
    runs[r].matched =
        CoincidenceMatch(config.desired, sim.output_times, config.zeta).all_correct;
  });

  PsdTimingResult res;
  std::vector<double> epochs;
  std::size_t matched = 0;
  for (const auto& r : runs) {
    res.converged_epoch.push_back(r.epoch);
    epochs.push_back(detail::CyclesOrInf(r.epoch));
    if (r.matched) ++matched;
  }
  res.median_epochs = stats::Median(epochs);
  res.matched_fraction =
      static_cast<double>(matched) / static_cast<double>(config.runs);

  // Learning raster and post-learning trace of run 0.
  const auto seed0 = DeriveSeed(config.seed, 0);
  const auto s0 = Setup(config, seed0);
  const auto neuron = config.neuron.Build().WithMode(NeuronMode::kMultiSpike);
  OnlineLearner online(s0.w0, PsdLearner(config, CoefficientView::kAugmented),
                       neuron);
  TrialTarget target;
  target.desired_times = config.desired;
  Table raster{"run0_raster", {"epoch", "spike_time"}, {}};
  for (std::size_t e = 0; e < config.max_epochs; ++e) {
    const auto sim = Simulate(s0.pattern, online.weights(), neuron);
    for (double t : sim.output_times) raster.Add(e, t);
    if (!online.Present(s0.pattern, target).error) break;
  }
  const auto final_sim = Simulate(s0.pattern, online.weights(), neuron);
  std::vector<double> times;
  const auto steps =
      static_cast<std::size_t>(std::floor(config.window / config.trace_dt + 1e-9));
  for (std::size_t k = 0; k <= steps; ++k) {
    times.push_back(static_cast<double>(k) * config.trace_dt);
  }
  const auto trace = SampleTrace(s0.pattern, online.weights(), times,
                                 final_sim.output_times, neuron);
  Table trace_table{"run0_trace", {"time", "voltage"}, {}};
  for (std::size_t k = 0; k < times.size(); ++k) trace_table.Add(times[k], trace[k]);

  Table per_run{"runs", {"run", "seed", "converged_epoch", "matched", "outputs"}, {}};
  for (std::size_t r = 0; r < runs.size(); ++r) {
    std::string outs;
    for (double t : runs[r].final_output) {
      if (!outs.empty()) outs += ',';
      outs += Cell(t);
    }
    per_run.Add(r, std::to_string(DeriveSeed(config.seed, r)),
                detail::CyclesOrInf(runs[r].epoch), runs[r].matched ? 1 : 0,
                outs.empty() ? std::string("-") : outs);
  }

  auto& rep = res.report;
  rep.experiment = "psd_timing";
  rep.tables = {per_run, raster, trace_table};
  rep.Set("runs", config.runs);
  rep.Set("seed", std::to_string(config.seed));
  rep.Set("median_converged_epoch", res.median_epochs);
  rep.Set("matched_fraction", res.matched_fraction);
  rep.Set("zeta_s", config.zeta);
  return res;
}

CausalityResult RunCausality(const PsdConfig& config) {
  CheckPsdConfig(config);
  if (config.desired.size() < 2) {
    throw ParameterError("causality compares the first two desired times");
  }
  struct Run {
    std::vector<double> aug_means;
    std::vector<double> abl_means;
    std::vector<detail::RankedSpike> init, aug, abl;
  };
  std::vector<Run> runs(config.runs);
  ParallelFor(config.runs, [&](std::size_t r) {
    const auto seed = DeriveSeed(config.seed, r);
    const auto s = Setup(config, seed);
    const auto aug = TrainPsd(config, s, CoefficientView::kAugmented, seed);
    const auto abl = TrainPsd(config, s, config.ablation, seed);
    for (double t_d : config.desired) {
      runs[r].aug_means.push_back(
          CausalMean(s.pattern, aug.weights, t_d, config.causal_window));
      runs[r].abl_means.push_back(
          CausalMean(s.pattern, abl.weights, t_d, config.causal_window));
    }
    runs[r].init = detail::RankByTime(s.pattern, s.w0);
    runs[r].aug = detail::RankByTime(s.pattern, aug.weights);
    runs[r].abl = detail::RankByTime(s.pattern, abl.weights);
  });

  CausalityResult res;
  std::vector<double> a1, a2, b1, b2;
  for (const auto& r : runs) {
    res.aug_window_means.push_back(r.aug_means);
    res.ablation_window_means.push_back(r.abl_means);
    a1.push_back(r.aug_means[0]);
    a2.push_back(r.aug_means[1]);
    b1.push_back(r.abl_means[0]);
    b2.push_back(r.abl_means[1]);
  }
  res.aug_mean_first = stats::Mean(a1);
  res.aug_mean_second = stats::Mean(a2);
  res.ablation_mean_first = stats::Mean(b1);
  res.ablation_mean_second = stats::Mean(b2);
  const auto ta = stats::PairedT(a1, a2);
  const auto tb = stats::PairedT(b1, b2);
  res.aug_p = ta.p;
  res.ablation_p = tb.p;

  // Weights aligned by chronological spike rank, averaged over runs.
  std::size_t ranks = config.n_afferents;
  for (const auto& r : runs) ranks = std::min(ranks, r.init.size());
  Table dist{"weights_by_rank",
             {"rank", "mean_time", "mean_coefficient", "w_initial", "w_aug",
              "w_ablation"},
             {}};
  const double inv = 1.0 / static_cast<double>(config.runs);
  for (std::size_t k = 0; k < ranks; ++k) {
    double t = 0, c = 0, wi = 0, wa = 0, wb = 0;
    for (const auto& r : runs) {
      t += r.init[k].time;
      c += r.init[k].coefficient;
      wi += r.init[k].weight;
      wa += r.aug[k].weight;
      wb += r.abl[k].weight;
    }
    dist.Add(k, t * inv, c * inv, wi * inv, wa * inv, wb * inv);
  }
  Table per_run{"runs", {"run", "seed", "aug_first", "aug_second",
                         "ablation_first", "ablation_second"}, {}};
  for (std::size_t r = 0; r < runs.size(); ++r) {
    per_run.Add(r, std::to_string(DeriveSeed(config.seed, r)),
                runs[r].aug_means[0], runs[r].aug_means[1],
                runs[r].abl_means[0], runs[r].abl_means[1]);
  }

  auto& rep = res.report;
  rep.experiment = "causality";
  rep.tables = {dist, per_run};
  rep.Set("runs", config.runs);
  rep.Set("seed", std::to_string(config.seed));
  rep.Set("ablation_view", detail::ViewName(config.ablation));
  rep.Set("causal_window_s", config.causal_window);
  rep.Set("aug_mean_first", res.aug_mean_first);
  rep.Set("aug_mean_second", res.aug_mean_second);
  rep.Set("aug_paired_t", ta.t);
  rep.Set("aug_p", res.aug_p);
  rep.Set("ablation_mean_first", res.ablation_mean_first);
  rep.Set("ablation_mean_second", res.ablation_mean_second);
  rep.Set("ablation_paired_t", tb.t);
  rep.Set("ablation_p", res.ablation_p);
  return res;
}

}  // namespace augspike::experiments
