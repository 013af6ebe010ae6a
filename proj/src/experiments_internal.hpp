#pragma once

// Helpers shared by the experiment protocols.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "augspike/experiments.hpp"

namespace augspike::experiments::detail {

// Equiprobable discrete coefficient set.
CoefficientScheme EqualSet(const std::vector<double>& values);

std::vector<double> InitialWeights(std::size_t n, const LearnParams& learn,
                                   Rng& rng);

LearnerConfig MakeLearner(LearningRule rule, const LearnParams& learn);

// Cycle index as a double, inf when absent.
double CyclesOrInf(const std::optional<std::size_t>& cycles);

std::string ViewName(CoefficientView view);

// Afferent times, coefficients and weights of a one-spike-per-afferent
// pattern, sorted by spike time.
struct RankedSpike {
  double time;
  double coefficient;
  double weight;
};
std::vector<RankedSpike> RankByTime(const SpikePattern& pattern,
                                    std::span<const double> weights);

}  // namespace augspike::experiments::detail
