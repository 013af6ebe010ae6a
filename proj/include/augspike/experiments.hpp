#pragma once

// Experiment protocols. Each Run* function is a pure function of its config
// (seeds included) and returns the raw aggregates plus a Report of tables.
// Independent runs fan out over ParallelFor with per-run derived seeds.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "augspike/patterns.hpp"
#include "augspike/report.hpp"
#include "augspike/training.hpp"

namespace augspike::experiments {

enum class ExperimentId {
  kClassify3,
  kCapacity,
  kPsdTiming,
  kCausality,
  kFeatureDetect,
  kRobustness,
  kVisual,
};

std::string_view ToString(ExperimentId id);
ExperimentId ParseExperimentId(std::string_view name);

struct NeuronParams {
  double tau_m_ms = 20.0;
  double tau_s_ms = 5.0;
  double threshold = 1.0;

  NeuronConfig Build() const { return NeuronConfig(tau_m_ms, tau_s_ms, threshold); }
};

struct LearnParams {
  double eta = 1e-4;
  double mu = 0.9;
  double w_mean = 0.0;  // initial weights ~ N(w_mean, w_std^2)
  double w_std = 0.001;
};

// Per-experiment neuron and learning defaults.
struct TableDefaults {
  NeuronParams neuron;
  LearnParams learn;
};
TableDefaults DefaultsFor(ExperimentId id);

// ---------------------------------------------------------------- classify3

struct Classify3Config {
  std::uint64_t seed = 1;
  std::size_t runs = 100;
  std::size_t n_afferents = 500;
  double rate = 2.0;
  double window = 0.5;
  std::vector<double> coefficients{0.5, 1.0, 1.5};
  std::size_t cycles = 100;
  // Plateau error = mean error rate over cycles [plateau_from, cycles).
  std::size_t plateau_from = 50;
  NeuronParams neuron = DefaultsFor(ExperimentId::kClassify3).neuron;
  LearnParams learn = DefaultsFor(ExperimentId::kClassify3).learn;
  CoefficientView ablation = CoefficientView::kBinary;
};

struct Classify3Result {
  // Mean error rate per cycle over runs.
  std::vector<double> aug_curve;
  std::vector<double> ablation_curve;
  std::vector<std::optional<std::size_t>> aug_converged;
  double aug_converged_fraction = 0.0;
  double ablation_plateau = 0.0;
  double aug_plateau = 0.0;
  Report report;
};

Classify3Result RunClassify3(const Classify3Config& config);

// ----------------------------------------------------------------- capacity

enum class LatencyMode { kRandom, kFixed };
std::string_view ToString(LatencyMode mode);

struct CapacityConfig {
  std::uint64_t seed = 1;
  std::size_t runs = 20;
  std::size_t n_afferents = 250;
  double window = 0.5;
  std::vector<int> q_values{1, 2, 3, 4};
  std::vector<LatencyMode> modes{LatencyMode::kRandom, LatencyMode::kFixed};
  std::vector<double> alphas_random{0.5,  1.0, 1.5,  2.0, 2.25, 2.5,
                                    2.75, 3.0, 3.25, 3.5, 4.0};
  std::vector<double> alphas_fixed{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35,
                                   0.4,  0.45, 0.5, 0.6};
  // Learning-time threshold that defines capacity.
  std::size_t cap = 1000;
  // Cycles a run may take before it is censored; above cap so the median can
  // be interpolated across the threshold.
  std::size_t measure_cycles = 1500;
  // Stop sweeping a curve once its median crosses cap, unless it crosses at
  // the first load.
  bool stop_at_crossing = true;
  // Runs are launched in fixed-size chunks; a grid point stops early once
  // more than half of its runs are censored. Fixed size keeps results
  // independent of the thread count.
  std::size_t chunk = 4;
  NeuronParams neuron = DefaultsFor(ExperimentId::kCapacity).neuron;
  LearnParams learn = DefaultsFor(ExperimentId::kCapacity).learn;
};

struct CapacityPoint {
  double alpha = 0.0;
  std::size_t patterns = 0;
  std::size_t evaluated = 0;
  std::size_t converged = 0;
  double median_cycles = 0.0;  // inf when censored
};

struct CapacityCurve {
  LatencyMode mode = LatencyMode::kRandom;
  int q = 1;
  std::vector<CapacityPoint> points;
  // Crossing of the median learning time through cap. 0 when the first grid
  // point already exceeds it; empty when no grid point does.
  std::optional<double> alpha_c;
};

struct CapacityResult {
  std::vector<CapacityCurve> curves;
  Report report;
};

CapacityResult RunCapacity(const CapacityConfig& config);

// Learning time (cycles before the first error-free cycle) of one run;
// empty when censored.
std::optional<std::size_t> CapacityRun(const CapacityConfig& config,
                                       LatencyMode mode, int q, double alpha,
                                       std::uint64_t seed);

// -------------------------------------------------------- psd / causality

struct PsdConfig {
  std::uint64_t seed = 1;
  std::size_t runs = 100;
  std::size_t n_afferents = 500;
  double window = 0.3;
  std::vector<CoefficientRegion> regions{
      {0.0, 0.1, 2.0}, {0.1, 0.2, 1.0}, {0.2, 0.3, 0.5}};
  std::vector<double> desired{0.1, 0.2};
  double zeta = 1e-3;
  std::size_t max_epochs = 100;
  // Causal window [t_d - causal_window, t_d) for weight statistics.
  double causal_window = 0.01;
  // Step of the exported post-learning trace of run 0.
  double trace_dt = 1e-4;
  NeuronParams neuron = DefaultsFor(ExperimentId::kPsdTiming).neuron;
  LearnParams learn = DefaultsFor(ExperimentId::kPsdTiming).learn;
  CoefficientView ablation = CoefficientView::kBinary;
};

struct PsdTimingResult {
  std::vector<std::optional<std::size_t>> converged_epoch;
  double median_epochs = 0.0;  // inf when more than half never converge
  double matched_fraction = 0.0;
  Report report;
};

PsdTimingResult RunPsdTiming(const PsdConfig& config);

struct CausalityResult {
  // Per run, per desired time: mean of max(w, 0) over afferents whose spike
  // lies in the causal window.
  std::vector<std::vector<double>> aug_window_means;
  std::vector<std::vector<double>> ablation_window_means;
  double aug_mean_first = 0.0;   // before desired[0]
  double aug_mean_second = 0.0;  // before desired[1]
  double ablation_mean_first = 0.0;
  double ablation_mean_second = 0.0;
  double aug_p = 1.0;
  double ablation_p = 1.0;
  Report report;
};

CausalityResult RunCausality(const PsdConfig& config);

// ----------------------------------------------------------- feature detect

struct FeatureConfig {
  std::uint64_t seed = 1;
  std::size_t runs = 50;
  FeatureTaskSpec task;
  std::vector<double> coefficients{0.5, 1.0, 1.5};
  std::size_t trials_per_cycle = 20;
  std::size_t max_cycles = 100;
  std::size_t eval_trials = 20;
  NeuronParams neuron = DefaultsFor(ExperimentId::kFeatureDetect).neuron;
  LearnParams learn = DefaultsFor(ExperimentId::kFeatureDetect).learn;
  CoefficientView ablation = CoefficientView::kBinary;
  bool run_ablation = true;
};

struct FeatureRuleStats {
  std::size_t occurrences = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
  // Mean output spikes per occurrence, per feature id, pooled over runs.
  std::vector<double> mean_response;
  // Per run: mean target response minus mean distractor response.
  std::vector<double> run_target_minus_distractor;
  double difference_p = 1.0;
  double median_background_spikes = 0.0;
  std::vector<std::size_t> cycles_trained;
};

struct FeatureResult {
  FeatureRuleStats aug;
  std::optional<FeatureRuleStats> ablation;
  Report report;
};

FeatureResult RunFeatureDetect(const FeatureConfig& config);

// --------------------------------------------------------------- robustness

struct RobustnessConfig {
  std::uint64_t seed = 1;
  std::size_t runs = 50;
  std::size_t n_afferents = 500;
  double rate = 2.0;
  double window = 0.5;
  std::vector<double> coefficients{0.5, 1.0, 1.5};
  std::size_t categories = 3;
  std::size_t cycles = 1000;
  int desired_spikes = 10;
  double psd_zeta = 0.01;
  // Strict readout: a multi-spike neuron responds with more than this many
  // spikes; a single-spike neuron responds by firing at all.
  int readout_spikes = 5;
  double train_sigma = 0.002;
  double train_p_del = 0.1;
  std::vector<double> sigma_grid{0.0, 0.01, 0.02, 0.03, 0.04, 0.05,
                                 0.06, 0.07, 0.08, 0.09, 0.1};
  std::vector<double> p_del_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  std::size_t eval_trials = 20;  // per category and noise level
  NeuronParams neuron = DefaultsFor(ExperimentId::kRobustness).neuron;
  LearnParams learn = DefaultsFor(ExperimentId::kRobustness).learn;
};

struct RobustnessCurve {
  LearningRule rule = LearningRule::kAugTmp;
  std::vector<double> jitter_accuracy;    // per sigma_grid entry
  std::vector<double> deletion_accuracy;  // per p_del_grid entry
};

struct RobustnessResult {
  std::vector<RobustnessCurve> curves;  // AugTmp, AugPSD, AugTDP
  Report report;
};

RobustnessResult RunRobustness(const RobustnessConfig& config);

// ------------------------------------------------------------------- visual

struct VisualConfig {
  std::uint64_t seed = 1;
  std::size_t runs = 3;
  std::filesystem::path data = "data/digits_subset.txt";
  double train_fraction = 0.7;
  double encoding_window = 0.1;
  double threshold_fraction = 0.1;
  std::size_t epochs = 60;
  int tdp_desired = 3;
  std::vector<LearningRule> rules{LearningRule::kAugTmp, LearningRule::kAugTdp};
  NeuronParams neuron = DefaultsFor(ExperimentId::kVisual).neuron;
  LearnParams learn = DefaultsFor(ExperimentId::kVisual).learn;
};

struct VisualRuleResult {
  LearningRule rule = LearningRule::kAugTmp;
  std::vector<double> run_accuracy;
  double mean_accuracy = 0.0;
  double mean_spikes_per_sample = 0.0;
  std::size_t encoding_units = 0;
};

struct VisualResult {
  std::vector<VisualRuleResult> rules;
  Report report;
};

VisualResult RunVisual(const VisualConfig& config);

}  // namespace augspike::experiments
