#include "augspike/plasticity.hpp"

#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

namespace augspike {
namespace {

// sum_j c_i^j K(t - t_i^j) accumulated into dw with the given scale.
void AddCredit(const SpikePattern& pattern, double t, double scale,
               const NeuronConfig& neuron, bool blind,
               std::vector<double>& dw) {
  for (const auto& s : pattern.spikes()) {
    if (s.time >= t) break;
    dw[s.afferent] +=
        scale * (blind ? 1.0 : s.coefficient) * PspKernel(t - s.time, neuron);
  }
}

void RequireMode(const NeuronConfig& neuron, NeuronMode mode,
                 const char* rule) {
  if (neuron.mode() != mode) {
    throw ParameterError(std::string(rule) +
                         (mode == NeuronMode::kMultiSpike
                              ? " requires a MultiSpike neuron"
                              : " requires a SingleSpikeShunting neuron"));
  }
}

}  // namespace

std::string_view ToString(LearningRule rule) {
  switch (rule) {
    case LearningRule::kAugTmp:
      return "augtmp";
    case LearningRule::kAugPsd:
      return "augpsd";
    case LearningRule::kAugTdp:
      return "augtdp";
  }
  return "?";
}

LearningRule ParseLearningRule(std::string_view name) {
  if (name == "augtmp" || name == "tmp") return LearningRule::kAugTmp;
  if (name == "augpsd" || name == "psd") return LearningRule::kAugPsd;
  if (name == "augtdp" || name == "tdp") return LearningRule::kAugTdp;
  throw ParameterError("unknown learning rule '" + std::string(name) + "'");
}

std::string_view ToString(TrialError error) {
  switch (error) {
    case TrialError::kNone:
      return "none";
    case TrialError::kMissTarget:
      return "miss";
    case TrialError::kFalseAlarm:
      return "false_alarm";
    case TrialError::kTooFew:
      return "too_few";
    case TrialError::kTooMany:
      return "too_many";
    case TrialError::kTimingMiss:
      return "timing_miss";
  }
  return "?";
}

UpdateDelta AugTmpUpdate(const SpikePattern& pattern,
                         std::span<const double> weights, bool is_target,
                         const NeuronConfig& neuron, double eta,
                         bool coefficient_blind) {
  RequireMode(neuron, NeuronMode::kSingleSpikeShunting, "AugTmp");
  const auto sim = Simulate(pattern, weights, neuron);
  return AugTmpUpdate(pattern, sim, is_target, neuron, eta, coefficient_blind);
}

UpdateDelta AugTmpUpdate(const SpikePattern& pattern, const SimResult& sim,
                         bool is_target, const NeuronConfig& neuron, double eta,
                         bool coefficient_blind) {
  RequireMode(neuron, NeuronMode::kSingleSpikeShunting, "AugTmp");
  UpdateDelta out;
  out.dw.assign(pattern.n_afferents(), 0.0);
  const bool fired = !sim.output_times.empty();
  if (is_target == fired) return out;
  out.error = is_target ? TrialError::kMissTarget : TrialError::kFalseAlarm;
  AddCredit(pattern, sim.t_max, is_target ? eta : -eta, neuron,
            coefficient_blind, out.dw);
  return out;
}

UpdateDelta AugPsdUpdate(const SpikePattern& pattern,
                         std::span<const double> weights,
                         std::span<const double> desired_times,
                         const NeuronConfig& neuron, double eta, double zeta,
                         bool coefficient_blind) {
  RequireMode(neuron, NeuronMode::kMultiSpike, "AugPSD");
  const auto sim = Simulate(pattern, weights, neuron);
  UpdateDelta out;
  out.dw.assign(pattern.n_afferents(), 0.0);
  const auto match = CoincidenceMatch(desired_times, sim.output_times, zeta);
  if (match.all_correct) return out;
  out.error = TrialError::kTimingMiss;
  for (double td : desired_times) {
    AddCredit(pattern, td, eta, neuron, coefficient_blind, out.dw);
  }
  for (double to : sim.output_times) {
    AddCredit(pattern, to, -eta, neuron, coefficient_blind, out.dw);
  }
  return out;
}

UpdateDelta AugTdpUpdate(const SpikePattern& pattern,
                         std::span<const double> weights, int n_desired,
                         const NeuronConfig& neuron, double eta,
                         const StsOptions& sts, GradientForm form,
                         bool coefficient_blind) {
  RequireMode(neuron, NeuronMode::kMultiSpike, "AugTDP");
  const auto sim = Simulate(pattern, weights, neuron);
  return AugTdpUpdate(pattern, weights, n_desired, sim.output_times.size(),
                      neuron, eta, sts, form, coefficient_blind);
}

UpdateDelta AugTdpUpdate(const SpikePattern& pattern,
                         std::span<const double> weights, int n_desired,
                         std::size_t n_actual, const NeuronConfig& neuron,
                         double eta, const StsOptions& sts, GradientForm form,
                         bool coefficient_blind) {
  RequireMode(neuron, NeuronMode::kMultiSpike, "AugTDP");
  if (n_desired < 0) throw ParameterError("desired spike count must be >= 0");
  UpdateDelta out;
  out.dw.assign(pattern.n_afferents(), 0.0);
  const auto n_d = static_cast<std::size_t>(n_desired);
  if (n_actual == n_d) return out;

  const bool ltp = n_actual < n_d;
  out.error = ltp ? TrialError::kTooFew : TrialError::kTooMany;
  const std::size_t k = ltp ? n_actual + 1 : n_actual;
  try {
    // The current threshold already brackets the target count.
    StsOptions opts = sts;
    (ltp ? opts.fires_fewer : opts.fires_at_least) = neuron.threshold();
    const auto crit = ComputeSts(pattern, weights, k, neuron, opts);
    const auto grad =
        StsGradient(pattern, weights, crit, neuron, form, coefficient_blind);
    const double scale = ltp ? eta : -eta;
    for (std::size_t i = 0; i < grad.size(); ++i) out.dw[i] = scale * grad[i];
  } catch (const NoSuchCritical& e) {
    spdlog::debug("AugTDP trial skipped: {}", e.what());
    out.skipped = true;
  } catch (const DegenerateCrossing& e) {
    spdlog::debug("AugTDP trial skipped: {}", e.what());
    out.skipped = true;
  }
  return out;
}

CoincidenceResult CoincidenceMatch(std::span<const double> desired,
                                   std::span<const double> actual,
                                   double zeta) {
  CoincidenceResult r;
  std::vector<bool> used(actual.size(), false);
  for (double td : desired) {
    bool hit = false;
    for (std::size_t h = 0; h < actual.size(); ++h) {
      if (used[h]) continue;
      if (actual[h] > td + zeta) break;
      if (actual[h] >= td - zeta) {
        used[h] = true;
        hit = true;
        break;
      }
    }
    if (hit) {
      ++r.hits;
    } else {
      ++r.misses;
    }
  }
  r.false_alarms = actual.size() - r.hits;
  r.all_correct = r.misses == 0 && r.false_alarms == 0;
  return r;
}

double SpikeDistance(std::span<const double> train_a,
                     std::span<const double> train_b, double tau) {
  if (!(tau > 0.0)) throw ParameterError("distance time constant must be > 0");
  auto cross = [tau](std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (double a : x) {
      for (double b : y) s += std::exp(-std::abs(a - b) / tau);
    }
    return s;
  };
  const double d = 0.5 * (cross(train_a, train_a) + cross(train_b, train_b) -
                          2.0 * cross(train_a, train_b));
  return d < 0.0 ? 0.0 : d;
}

std::vector<double> ApplyMomentum(std::span<const double> current,
                                  std::span<const double> previous, double mu) {
  if (current.size() != previous.size()) {
    throw InputError("momentum buffers differ in size");
  }
  std::vector<double> out(current.size());
  for (std::size_t i = 0; i < current.size(); ++i) {
    out[i] = current[i] + mu * previous[i];
  }
  return out;
}

}  // namespace augspike
