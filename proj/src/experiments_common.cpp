#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "augspike/experiments.hpp"
#include "experiments_internal.hpp"

namespace augspike::experiments {

namespace {

struct IdName {
  ExperimentId id;
  std::string_view name;
};

constexpr IdName kIds[] = {
    {ExperimentId::kClassify3, "classify3"},
    {ExperimentId::kCapacity, "capacity"},
    {ExperimentId::kPsdTiming, "psd_timing"},
    {ExperimentId::kCausality, "causality"},
    {ExperimentId::kFeatureDetect, "feature_detect"},
    {ExperimentId::kRobustness, "robustness"},
    {ExperimentId::kVisual, "visual"},
};

}  // namespace

std::string_view ToString(ExperimentId id) {
  for (const auto& e : kIds) {
    if (e.id == id) return e.name;
  }
  return "unknown";
}

ExperimentId ParseExperimentId(std::string_view name) {
  for (const auto& e : kIds) {
    if (e.name == name) return e.id;
  }
  throw ParameterError("unknown experiment '" + std::string(name) + "'");
}

std::string_view ToString(LatencyMode mode) {
  return mode == LatencyMode::kRandom ? "random" : "fixed";
}

TableDefaults DefaultsFor(ExperimentId id) {
  // tau_m, tau_s (ms), threshold; eta, mu, initial weight mean and stddev.
  switch (id) {
    case ExperimentId::kClassify3:
      return {{20.0, 5.0, 1.0}, {1e-4, 0.9, 0.0, 0.001}};
    case ExperimentId::kCapacity:
      return {{10.0, 5.0, 1.0}, {1e-4, 0.99, 0.0, 0.001}};
    case ExperimentId::kPsdTiming:
    case ExperimentId::kCausality:
      return {{10.0, 5.0, 1.0}, {0.01, 0.0, 0.01, 0.01}};
    case ExperimentId::kFeatureDetect:
      return {{20.0, 5.0, 1.0}, {1e-4, 0.9, 0.01, 0.01}};
    case ExperimentId::kRobustness:
      return {{20.0, 5.0, 1.0}, {1e-4, 0.9, 0.0, 0.001}};
    case ExperimentId::kVisual:
      return {{40.0, 10.0, 1.0}, {2e-4, 0.9, 0.01, 0.01}};
  }
  return {};
}

namespace detail {

CoefficientScheme EqualSet(const std::vector<double>& values) {
  if (values.empty()) throw ParameterError("coefficient set is empty");
  std::vector<double> probs(values.size(), 1.0 / static_cast<double>(values.size()));
  return CoefficientScheme::DiscreteSet(values, probs);
}

std::vector<double> InitialWeights(std::size_t n, const LearnParams& learn,
                                   Rng& rng) {
  return GaussianWeights(n, learn.w_mean, learn.w_std, rng);
}

LearnerConfig MakeLearner(LearningRule rule, const LearnParams& learn) {
  LearnerConfig l;
  l.rule = rule;
  l.eta = learn.eta;
  l.mu = learn.mu;
  return l;
}

double CyclesOrInf(const std::optional<std::size_t>& cycles) {
  return cycles ? static_cast<double>(*cycles)
                : std::numeric_limits<double>::infinity();
}

std::string ViewName(CoefficientView view) {
  switch (view) {
    case CoefficientView::kAugmented:
      return "augmented";
    case CoefficientView::kBlindRule:
      return "blind_rule";
    case CoefficientView::kBinary:
      return "binary";
  }
  return "unknown";
}

std::vector<RankedSpike> RankByTime(const SpikePattern& pattern,
                                    std::span<const double> weights) {
  std::vector<RankedSpike> out;
  out.reserve(pattern.size());
  for (const auto& s : pattern.spikes()) {
    out.push_back({s.time, s.coefficient, weights[s.afferent]});
  }
  // Spikes are already in canonical time order.
  return out;
}

}  // namespace detail

}  // namespace augspike::experiments
