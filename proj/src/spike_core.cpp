#include "augspike/spike_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "membrane.hpp"

namespace augspike {

bool SpikeBefore(const AugmentedSpike& a, const AugmentedSpike& b) {
  if (a.time != b.time) return a.time < b.time;
  return a.afferent < b.afferent;
}

SpikePattern::SpikePattern(std::size_t n_afferents, double window,
                           std::vector<AugmentedSpike> spikes, int label)
    : n_afferents_(n_afferents),
      window_(window),
      spikes_(std::move(spikes)),
      label_(label) {
  if (!std::isfinite(window) || window < 0.0) {
    throw InputError("pattern window must be finite and non-negative");
  }
  for (const auto& s : spikes_) {
    if (s.afferent >= n_afferents_) {
      throw InputError("spike afferent " + std::to_string(s.afferent) +
                       " out of range for " + std::to_string(n_afferents_) +
                       " afferents");
    }
    if (!std::isfinite(s.time) || s.time < 0.0 || s.time > window_) {
      throw InputError("spike time " + std::to_string(s.time) +
                       " outside [0, window]");
    }
    if (!std::isfinite(s.coefficient)) {
      throw InputError("spike coefficient must be finite");
    }
  }
  std::stable_sort(spikes_.begin(), spikes_.end(), SpikeBefore);
}

SpikePattern SpikePattern::Binarized() const {
  SpikePattern out = *this;
  for (auto& s : out.spikes_) s.coefficient = 1.0;
  return out;
}

double KernelPeakTime(double tau_m, double tau_s) {
  if (!(tau_s > 0.0) || !(tau_m > tau_s) || !std::isfinite(tau_m)) {
    throw ParameterError("time constants must satisfy tau_m > tau_s > 0");
  }
  return tau_m * tau_s / (tau_m - tau_s) * std::log(tau_m / tau_s);
}

double ComputeV0(double tau_m, double tau_s) {
  const double tp = KernelPeakTime(tau_m, tau_s);
  return 1.0 / (std::exp(-tp / tau_m) - std::exp(-tp / tau_s));
}

NeuronConfig::NeuronConfig(double tau_m_ms, double tau_s_ms, double threshold,
                           NeuronMode mode)
    : tau_m_ms_(tau_m_ms),
      tau_s_ms_(tau_s_ms),
      threshold_(threshold),
      mode_(mode),
      v0_(ComputeV0(tau_m_ms, tau_s_ms)),
      t_peak_(KernelPeakTime(tau_m_ms, tau_s_ms) * 1e-3) {
  if (!std::isfinite(threshold) || threshold <= 0.0) {
    throw ParameterError("firing threshold must be positive and finite");
  }
}

NeuronConfig NeuronConfig::WithThreshold(double threshold) const {
  return NeuronConfig(tau_m_ms_, tau_s_ms_, threshold, mode_);
}

NeuronConfig NeuronConfig::WithMode(NeuronMode mode) const {
  NeuronConfig out = *this;
  out.mode_ = mode;
  return out;
}

double PspKernel(double dt, const NeuronConfig& config) {
  if (dt <= 0.0) return 0.0;
  return config.v0() *
         (std::exp(-dt / config.tau_m()) - std::exp(-dt / config.tau_s()));
}

void CheckWeights(const SpikePattern& pattern,
                  std::span<const double> weights) {
  if (weights.size() != pattern.n_afferents()) {
    throw InputError("weight vector has " + std::to_string(weights.size()) +
                     " entries, pattern has " +
                     std::to_string(pattern.n_afferents()) + " afferents");
  }
  for (double w : weights) {
    if (!std::isfinite(w)) throw InputError("weights must be finite");
  }
}

double UnresetPotential(const SpikePattern& pattern,
                        std::span<const double> weights, double t,
                        const NeuronConfig& config) {
  double u = 0.0;
  for (const auto& s : pattern.spikes()) {
    if (s.time >= t) break;
    u += weights[s.afferent] * s.coefficient * PspKernel(t - s.time, config);
  }
  return u;
}

double ComposedPotential(const SpikePattern& pattern,
                         std::span<const double> weights, double t,
                         std::span<const double> output_times, double theta,
                         const NeuronConfig& config) {
  double v = UnresetPotential(pattern, weights, t, config);
  for (double ts : output_times) {
    if (ts < t) v -= theta * std::exp(-(t - ts) / config.tau_m());
  }
  return v;
}

SimResult Simulate(const SpikePattern& pattern, std::span<const double> weights,
                   const NeuronConfig& config, const SimOptions& options) {
  CheckWeights(pattern, weights);
  const auto events = detail::BuildEvents(pattern, weights);
  const bool shunting = config.mode() == NeuronMode::kSingleSpikeShunting;
  auto scan = detail::Scan(events, pattern.window(), config.threshold(),
                           /*reset=*/!shunting, options.max_spikes, config);

  SimResult result;
  result.output_times = std::move(scan.crossings);
  result.t_max = scan.t_max;
  result.v_max = scan.v_max;

  if (options.trace_dt > 0.0) {
    const auto n = static_cast<std::size_t>(
        std::floor(pattern.window() / options.trace_dt + 1e-9));
    result.trace.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      const double t = static_cast<double>(k) * options.trace_dt;
      double v;
      if (shunting && !result.output_times.empty() &&
          t > result.output_times.front()) {
        const double ts = result.output_times.front();
        v = config.threshold() * std::exp(-(t - ts) / config.tau_m());
      } else {
        v = ComposedPotential(pattern, weights, t, result.output_times,
                              config.threshold(), config);
      }
      result.trace.push_back({t, v});
    }
  }
  return result;
}

PeakResult FindTmax(const SpikePattern& pattern,
                    std::span<const double> weights,
                    const NeuronConfig& config) {
  const auto r = Simulate(pattern, weights, config);
  return {r.t_max, r.v_max};
}

double Vdot(const SpikePattern& pattern, std::span<const double> weights,
            double t, std::span<const double> prior_output_times,
            double theta_star, const NeuronConfig& config) {
  const double inv_m = 1.0 / config.tau_m();
  const double inv_s = 1.0 / config.tau_s();
  double slow = 0.0;
  double fast = 0.0;
  for (const auto& s : pattern.spikes()) {
    if (s.time >= t) break;
    const double amp = weights[s.afferent] * s.coefficient;
    const double dt = t - s.time;
    fast += amp * std::exp(-dt * inv_s);
    slow += amp * std::exp(-dt * inv_m);
  }
  double resets = 0.0;
  for (double ts : prior_output_times) {
    if (ts < t) resets += std::exp(-(t - ts) * inv_m);
  }
  return config.v0() * (inv_s * fast - inv_m * slow) +
         theta_star * inv_m * resets;
}

std::vector<double> PotentialGradient(const SpikePattern& pattern, double t,
                                      const NeuronConfig& config) {
  std::vector<double> grad(pattern.n_afferents(), 0.0);
  for (const auto& s : pattern.spikes()) {
    if (s.time >= t) break;
    grad[s.afferent] += s.coefficient * PspKernel(t - s.time, config);
  }
  return grad;
}

double FirstPeakAfter(const SpikePattern& pattern,
                      std::span<const double> weights, double t_from,
                      std::span<const double> output_times, double theta,
                      const NeuronConfig& config) {
  CheckWeights(pattern, weights);
  const double inv_m = 1.0 / config.tau_m();
  const double inv_s = 1.0 / config.tau_s();
  const double v0 = config.v0();
  const auto events = detail::BuildEvents(pattern, weights);

  // State just after t_from: inputs at or before t_from shape the slope
  // beyond it, resets count only when strictly earlier.
  double am = 0.0, as = 0.0, r = 0.0;
  std::size_t i = 0;
  for (; i < events.size() && events[i].time <= t_from; ++i) {
    const double dt = t_from - events[i].time;
    am += events[i].amplitude * std::exp(-dt * inv_m);
    as += events[i].amplitude * std::exp(-dt * inv_s);
  }
  for (double ts : output_times) {
    if (ts < t_from) r += std::exp(-(t_from - ts) * inv_m);
  }

  double t0 = t_from;
  for (;;) {
    const double t1 = i < events.size() ? events[i].time : pattern.window();
    const double a = v0 * am - theta * r;
    const double b = v0 * as;
    const double slope0 = -a * inv_m + b * inv_s;
    if (slope0 <= 0.0) return t0;
    // Rising at t0, so the stationary point (if any) is the maximum.
    if (a != 0.0 && b != 0.0) {
      const double ratio = (b * inv_s) / (a * inv_m);
      if (ratio > 0.0) {
        const double xc = std::log(ratio) / (inv_s - inv_m);
        if (xc > 0.0 && xc <= t1 - t0) return t0 + xc;
      }
    }
    if (i >= events.size()) return pattern.window();
    const double dt = t1 - t0;
    const double dm = std::exp(-dt * inv_m);
    am *= dm;
    as *= std::exp(-dt * inv_s);
    r *= dm;
    t0 = t1;
    while (i < events.size() && events[i].time == t1) {
      am += events[i].amplitude;
      as += events[i].amplitude;
      ++i;
    }
  }
}

}  // namespace augspike
