#include "augspike/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace augspike {

std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer over a golden-ratio stride.
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CoefficientScheme CoefficientScheme::Constant() { return {}; }

CoefficientScheme CoefficientScheme::DiscreteSet(
    std::vector<double> values, std::vector<double> probabilities) {
  if (values.empty() || values.size() != probabilities.size()) {
    throw ParameterError("discrete coefficient set needs one probability per value");
  }
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) throw ParameterError("probabilities must be >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ParameterError("coefficient probabilities must sum to 1");
  }
  CoefficientScheme s;
  s.kind_ = Kind::kDiscreteSet;
  s.values_ = std::move(values);
  s.probabilities_ = std::move(probabilities);
  return s;
}

CoefficientScheme CoefficientScheme::QLevels(int q) {
  if (q < 1) throw ParameterError("Q must be >= 1");
  CoefficientScheme s;
  s.kind_ = Kind::kQLevels;
  s.values_.clear();
  if (q == 1) {
    s.values_.push_back(1.0);
  } else {
    for (int i = 0; i < q; ++i) {
      s.values_.push_back(0.5 + static_cast<double>(i) / (q - 1));
    }
  }
  s.probabilities_.assign(s.values_.size(), 1.0 / s.values_.size());
  return s;
}

CoefficientScheme CoefficientScheme::RegionMap(
    std::vector<CoefficientRegion> regions) {
  if (regions.empty()) throw ParameterError("region map is empty");
  std::sort(regions.begin(), regions.end(),
            [](const auto& a, const auto& b) { return a.begin < b.begin; });
  CoefficientScheme s;
  s.kind_ = Kind::kRegionMap;
  s.regions_ = std::move(regions);
  return s;
}

void CoefficientScheme::Validate(double window) const {
  if (kind_ != Kind::kRegionMap) return;
  constexpr double kEps = 1e-12;
  double covered = 0.0;
  for (const auto& r : regions_) {
    if (r.begin > covered + kEps || r.end < r.begin) {
      throw ParameterError("coefficient regions leave a gap at " +
                           std::to_string(covered) + " s");
    }
    covered = std::max(covered, r.end);
  }
  if (covered + kEps < window) {
    throw ParameterError("coefficient regions end before the window");
  }
}

double CoefficientScheme::Draw(double time, Rng& rng) const {
  switch (kind_) {
    case Kind::kConstant:
      return 1.0;
    case Kind::kQLevels: {
      std::uniform_int_distribution<std::size_t> pick(0, values_.size() - 1);
      return values_[pick(rng)];
    }
    case Kind::kDiscreteSet: {
      std::discrete_distribution<std::size_t> pick(probabilities_.begin(),
                                                   probabilities_.end());
      return values_[pick(rng)];
    }
    case Kind::kRegionMap: {
      for (std::size_t i = 0; i < regions_.size(); ++i) {
        const auto& r = regions_[i];
        const bool last = i + 1 == regions_.size();
        if (time >= r.begin && (time < r.end || (last && time <= r.end))) {
          return r.coefficient;
        }
      }
      throw ParameterError("no coefficient region covers t = " +
                           std::to_string(time));
    }
  }
  return 1.0;
}

namespace {

void AppendPoisson(std::size_t afferent, double rate, double t_begin,
                   double t_end, const CoefficientScheme& scheme, Rng& rng,
                   std::vector<AugmentedSpike>& out) {
  if (rate <= 0.0) return;
  std::exponential_distribution<double> gap(rate);
  for (double t = t_begin + gap(rng); t < t_end; t += gap(rng)) {
    out.push_back({afferent, t, scheme.Draw(t, rng)});
  }
}

}  // namespace

SpikePattern PoissonPattern(std::size_t n_afferents, double rate, double window,
                            const CoefficientScheme& scheme, Rng& rng) {
  if (!(rate >= 0.0)) throw ParameterError("Poisson rate must be >= 0");
  scheme.Validate(window);
  std::vector<AugmentedSpike> spikes;
  spikes.reserve(static_cast<std::size_t>(n_afferents * rate * window * 1.2) + 8);
  for (std::size_t i = 0; i < n_afferents; ++i) {
    AppendPoisson(i, rate, 0.0, window, scheme, rng, spikes);
  }
  return SpikePattern(n_afferents, window, std::move(spikes));
}

SpikePattern LatencyPattern(std::size_t n_afferents, double window,
                            const CoefficientScheme& scheme, Rng& rng) {
  if (!(window > 0.0)) throw ParameterError("latency window must be > 0");
  scheme.Validate(window);
  std::uniform_real_distribution<double> when(0.0, window);
  std::vector<AugmentedSpike> spikes;
  spikes.reserve(n_afferents);
  for (std::size_t i = 0; i < n_afferents; ++i) {
    const double t = when(rng);
    spikes.push_back({i, t, scheme.Draw(t, rng)});
  }
  return SpikePattern(n_afferents, window, std::move(spikes));
}

SpikePattern RefreshCoefficients(const SpikePattern& pattern,
                                 const CoefficientScheme& scheme, Rng& rng) {
  std::vector<AugmentedSpike> spikes(pattern.spikes().begin(),
                                     pattern.spikes().end());
  for (auto& s : spikes) s.coefficient = scheme.Draw(s.time, rng);
  return SpikePattern(pattern.n_afferents(), pattern.window(),
                      std::move(spikes), pattern.label());
}

SpikePattern RegionCoefficientPattern(std::size_t n_afferents, double window,
                                      const CoefficientScheme& regions,
                                      Rng& rng) {
  if (regions.kind() != CoefficientScheme::Kind::kRegionMap) {
    throw ParameterError("region-coefficient pattern needs a region map");
  }
  return LatencyPattern(n_afferents, window, regions, rng);
}

void NoiseSpec::Validate() const {
  if (!(sigma_jit >= 0.0)) throw ParameterError("jitter sigma must be >= 0");
  if (!(p_del >= 0.0 && p_del <= 1.0)) {
    throw ParameterError("deletion probability must lie in [0, 1]");
  }
}

SpikePattern JitterNoise(const SpikePattern& pattern, double sigma_jit,
                         Rng& rng) {
  if (!(sigma_jit >= 0.0)) throw ParameterError("jitter sigma must be >= 0");
  if (sigma_jit == 0.0) return pattern;
  std::normal_distribution<double> jitter(0.0, sigma_jit);
  std::vector<AugmentedSpike> spikes(pattern.spikes().begin(),
                                     pattern.spikes().end());
  for (auto& s : spikes) {
    s.time = std::clamp(s.time + jitter(rng), 0.0, pattern.window());
  }
  return SpikePattern(pattern.n_afferents(), pattern.window(),
                      std::move(spikes), pattern.label());
}

SpikePattern DeletionNoise(const SpikePattern& pattern, double p_del,
                           Rng& rng) {
  if (!(p_del >= 0.0 && p_del <= 1.0)) {
    throw ParameterError("deletion probability must lie in [0, 1]");
  }
  if (p_del == 0.0) return pattern;
  std::bernoulli_distribution keep(1.0 - p_del);
  std::vector<AugmentedSpike> spikes;
  spikes.reserve(pattern.size());
  for (const auto& s : pattern.spikes()) {
    if (keep(rng)) spikes.push_back(s);
  }
  return SpikePattern(pattern.n_afferents(), pattern.window(),
                      std::move(spikes), pattern.label());
}

SpikePattern ApplyNoise(const SpikePattern& pattern, const NoiseSpec& noise,
                        Rng& rng) {
  return DeletionNoise(JitterNoise(pattern, noise.sigma_jit, rng), noise.p_del,
                       rng);
}

void FeatureTaskSpec::Validate() const {
  if (n_features == 0) throw ParameterError("feature task needs >= 1 feature");
  if (targets.size() != n_features) {
    throw ParameterError("feature targets must list one count per feature");
  }
  for (int t : targets) {
    if (t < 0) throw ParameterError("desired counts must be >= 0");
  }
  if (!(feature_window > 0.0) || !(background_window >= feature_window)) {
    throw ParameterError("feature window must be positive and fit the trial");
  }
  if (!(mean_occurrences >= 0.0) || !(feature_rate >= 0.0) ||
      !(background_rate >= 0.0) || !(global_noise_rate >= 0.0)) {
    throw ParameterError("feature task rates must be >= 0");
  }
}

std::vector<SpikePattern> GenerateFeatures(const FeatureTaskSpec& spec,
                                           const CoefficientScheme& scheme,
                                           Rng& rng) {
  spec.Validate();
  std::vector<SpikePattern> features;
  features.reserve(spec.n_features);
  if (spec.shared_timings) {
    const auto base = PoissonPattern(spec.n_afferents, spec.feature_rate,
                                     spec.feature_window, scheme, rng);
    for (std::size_t f = 0; f < spec.n_features; ++f) {
      auto feat = RefreshCoefficients(base, scheme, rng);
      feat.set_label(static_cast<int>(f));
      features.push_back(std::move(feat));
    }
  } else {
    for (std::size_t f = 0; f < spec.n_features; ++f) {
      auto feat = PoissonPattern(spec.n_afferents, spec.feature_rate,
                                 spec.feature_window, scheme, rng);
      feat.set_label(static_cast<int>(f));
      features.push_back(std::move(feat));
    }
  }
  return features;
}

FeatureTrial BuildFeatureTrial(const FeatureTaskSpec& spec,
                               const std::vector<SpikePattern>& features,
                               const CoefficientScheme& scheme, Rng& rng) {
  spec.Validate();
  if (features.size() != spec.n_features) {
    throw InputError("feature set size does not match the task spec");
  }
  const double window = spec.background_window;
  const double len = spec.feature_window;

  // Occurrence counts that overflow the window are redrawn a bounded number
  // of times.
  constexpr int kMaxCountDraws = 1000;
  std::vector<int> ids;
  std::poisson_distribution<int> count(
      spec.mean_occurrences > 0.0 ? spec.mean_occurrences : 1.0);
  double free = -1.0;
  for (int draw = 0; draw < kMaxCountDraws && free < 0.0; ++draw) {
    ids.clear();
    for (std::size_t f = 0; f < spec.n_features; ++f) {
      const int c = spec.mean_occurrences > 0.0 ? count(rng) : 0;
      ids.insert(ids.end(), static_cast<std::size_t>(c), static_cast<int>(f));
    }
    free = window - static_cast<double>(ids.size()) * len;
  }
  if (free < 0.0) {
    throw PlacementError("feature occurrences do not fit in the trial window after " +
                         std::to_string(kMaxCountDraws) + " draws");
  }
  std::shuffle(ids.begin(), ids.end(), rng);

  // Uniform non-overlapping layout: sorted offsets in the free length, each
  // shifted by the occurrences already laid before it.
  std::uniform_real_distribution<double> offset(0.0, free);
  std::vector<double> gaps(ids.size());
  for (auto& g : gaps) g = offset(rng);
  std::sort(gaps.begin(), gaps.end());

  FeatureTrial trial;
  std::vector<AugmentedSpike> spikes;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const double start = gaps[k] + static_cast<double>(k) * len;
    trial.occurrences.push_back({ids[k], start});
    for (const auto& s : features[static_cast<std::size_t>(ids[k])].spikes()) {
      spikes.push_back({s.afferent, std::min(start + s.time, window),
                        s.coefficient});
    }
  }

  auto inside_feature = [&](double t) {
    for (const auto& occ : trial.occurrences) {
      if (t >= occ.start && t < occ.start + len) return true;
    }
    return false;
  };
  std::vector<AugmentedSpike> background;
  for (std::size_t i = 0; i < spec.n_afferents; ++i) {
    AppendPoisson(i, spec.background_rate, 0.0, window, scheme, rng,
                  background);
  }
  for (const auto& s : background) {
    if (!inside_feature(s.time)) spikes.push_back(s);
  }
  for (std::size_t i = 0; i < spec.n_afferents; ++i) {
    AppendPoisson(i, spec.global_noise_rate, 0.0, window, scheme, rng, spikes);
  }

  trial.pattern = SpikePattern(spec.n_afferents, window, std::move(spikes),
                               DesiredCount(spec, trial));
  return trial;
}

int DesiredCount(const FeatureTaskSpec& spec, const FeatureTrial& trial) {
  int total = 0;
  for (const auto& occ : trial.occurrences) {
    total += spec.targets[static_cast<std::size_t>(occ.feature)];
  }
  return total;
}

std::vector<double> GaussianWeights(std::size_t n, double mean, double stddev,
                                    Rng& rng) {
  std::normal_distribution<double> dist(mean, stddev);
  std::vector<double> w(n);
  for (auto& x : w) x = stddev > 0.0 ? dist(rng) : mean;
  return w;
}

}  // namespace augspike
