#pragma once

// Stochastic input generators, coefficient schemes and noise transforms.
// Every generator is a pure function of its arguments and the rng handle.

#include <cstdint>
#include <random>
#include <vector>

#include "augspike/spike_core.hpp"

namespace augspike {

using Rng = std::mt19937_64;

// Stateless mix of (base, index) for per-run / per-trial seeds.
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t index);

struct CoefficientRegion {
  double begin;  // inclusive
  double end;    // exclusive, except for the last region
  double coefficient;
};

class CoefficientScheme {
 public:
  enum class Kind { kConstant, kDiscreteSet, kQLevels, kRegionMap };

  static CoefficientScheme Constant();
  // Probabilities must be non-negative and sum to 1.
  static CoefficientScheme DiscreteSet(std::vector<double> values,
                                       std::vector<double> probabilities);
  // Q evenly spaced values on [0.5, 1.5], equiprobable; Q = 1 gives {1.0}.
  static CoefficientScheme QLevels(int q);
  // Regions must tile [0, window] without gaps (checked by Validate).
  static CoefficientScheme RegionMap(std::vector<CoefficientRegion> regions);

  Kind kind() const { return kind_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<CoefficientRegion>& regions() const { return regions_; }

  double Draw(double time, Rng& rng) const;
  // Throws ParameterError when a region map leaves part of [0, window]
  // uncovered.
  void Validate(double window) const;

 private:
  Kind kind_ = Kind::kConstant;
  std::vector<double> values_{1.0};
  std::vector<double> probabilities_{1.0};
  std::vector<CoefficientRegion> regions_;
};

SpikePattern PoissonPattern(std::size_t n_afferents, double rate, double window,
                            const CoefficientScheme& scheme, Rng& rng);

// One spike per afferent at a Uniform[0, window] time.
SpikePattern LatencyPattern(std::size_t n_afferents, double window,
                            const CoefficientScheme& scheme, Rng& rng);

// Same afferents and times, coefficients redrawn.
SpikePattern RefreshCoefficients(const SpikePattern& pattern,
                                 const CoefficientScheme& scheme, Rng& rng);

// Latency pattern whose coefficients follow a time-region map.
SpikePattern RegionCoefficientPattern(std::size_t n_afferents, double window,
                                      const CoefficientScheme& regions,
                                      Rng& rng);

struct NoiseSpec {
  double sigma_jit = 0.0;  // seconds
  double p_del = 0.0;

  void Validate() const;
};

// Gaussian jitter on every time, clamped to [0, window], re-sorted.
SpikePattern JitterNoise(const SpikePattern& pattern, double sigma_jit,
                         Rng& rng);
// Drops each spike independently with probability p_del.
SpikePattern DeletionNoise(const SpikePattern& pattern, double p_del, Rng& rng);
// Jitter then deletion.
SpikePattern ApplyNoise(const SpikePattern& pattern, const NoiseSpec& noise,
                        Rng& rng);

struct FeatureTaskSpec {
  std::size_t n_afferents = 500;
  std::size_t n_features = 4;
  double feature_window = 0.1;
  double feature_rate = 4.0;
  double background_window = 2.0;
  double background_rate = 4.0;
  double mean_occurrences = 3.0;
  double global_noise_rate = 1.0;
  bool shared_timings = true;
  // Desired output spike count per feature id (0 for distractors).
  std::vector<int> targets{2, 1, 0, 0};

  void Validate() const;
};

struct FeatureOccurrence {
  int feature;
  double start;
};

struct FeatureTrial {
  SpikePattern pattern;
  std::vector<FeatureOccurrence> occurrences;  // sorted by start
};

// Frozen feature templates. With shared_timings all templates carry the same
// spike times and differ only in coefficients.
std::vector<SpikePattern> GenerateFeatures(const FeatureTaskSpec& spec,
                                           const CoefficientScheme& scheme,
                                           Rng& rng);

// Background Poisson activity with Poisson(mean_occurrences) embedded copies
// of each feature at non-overlapping uniform positions. Background is removed
// inside occurrences; global noise is superimposed everywhere. Throws
// PlacementError when no draw of occurrence counts out of 1000 fits the window.
FeatureTrial BuildFeatureTrial(const FeatureTaskSpec& spec,
                               const std::vector<SpikePattern>& features,
                               const CoefficientScheme& scheme, Rng& rng);

// Sum of target counts over the annotated occurrences.
int DesiredCount(const FeatureTaskSpec& spec, const FeatureTrial& trial);

std::vector<double> GaussianWeights(std::size_t n, double mean, double stddev,
                                    Rng& rng);

}  // namespace augspike
