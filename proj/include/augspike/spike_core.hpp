#pragma once

// Augmented-spike data model and exact event-driven neuron simulation.
//
// The membrane potential of the current-based LIF neuron is
//
//   V(t) = sum_i w_i sum_{t_i^j < t} c_i^j K(t - t_i^j)
//          - theta * sum_{t_s^j < t} exp(-(t - t_s^j) / tau_m)
//
// with the double-exponential kernel K normalized to a unit peak. Between two
// consecutive events V is a sum of one tau_m and one tau_s exponential, so it
// has at most one extremum per segment; crossings and maxima are located in
// closed form plus a bracketed Newton polish.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "augspike/errors.hpp"

namespace augspike {

struct AugmentedSpike {
  std::size_t afferent = 0;
  double time = 0.0;         // seconds
  double coefficient = 1.0;  // dimensionless, may be negative

  friend bool operator==(const AugmentedSpike&, const AugmentedSpike&) = default;
};

// Canonical order: (time, afferent).
bool SpikeBefore(const AugmentedSpike& a, const AugmentedSpike& b);

class SpikePattern {
 public:
  SpikePattern() = default;
  // Validates every spike and sorts into canonical order. Throws InputError on
  // out-of-range afferents, times outside [0, window] or non-finite values.
  SpikePattern(std::size_t n_afferents, double window,
               std::vector<AugmentedSpike> spikes, int label = 0);

  std::size_t n_afferents() const { return n_afferents_; }
  double window() const { return window_; }
  std::span<const AugmentedSpike> spikes() const { return spikes_; }
  std::size_t size() const { return spikes_.size(); }
  bool empty() const { return spikes_.empty(); }
  int label() const { return label_; }
  void set_label(int label) { label_ = label; }

  // Copy with every coefficient replaced by 1.
  SpikePattern Binarized() const;

  friend bool operator==(const SpikePattern&, const SpikePattern&) = default;

 private:
  std::size_t n_afferents_ = 0;
  double window_ = 0.0;
  std::vector<AugmentedSpike> spikes_;
  int label_ = 0;
};

enum class NeuronMode { kMultiSpike, kSingleSpikeShunting };

// Peak-normalization constant of the PSP kernel. Time constants in any
// consistent unit. Throws ParameterError unless tau_m > tau_s > 0.
double ComputeV0(double tau_m, double tau_s);

// Time of the kernel peak, same unit as the inputs.
double KernelPeakTime(double tau_m, double tau_s);

// Neuron parameters. Time constants are held in milliseconds; every accessor
// that feeds the dynamics converts to seconds.
class NeuronConfig {
 public:
  NeuronConfig() : NeuronConfig(20.0, 5.0) {}
  NeuronConfig(double tau_m_ms, double tau_s_ms, double threshold = 1.0,
               NeuronMode mode = NeuronMode::kMultiSpike);

  double tau_m_ms() const { return tau_m_ms_; }
  double tau_s_ms() const { return tau_s_ms_; }
  double tau_m() const { return tau_m_ms_ * 1e-3; }
  double tau_s() const { return tau_s_ms_ * 1e-3; }
  double threshold() const { return threshold_; }
  NeuronMode mode() const { return mode_; }
  double v0() const { return v0_; }
  // Kernel peak time in seconds.
  double t_peak() const { return t_peak_; }

  NeuronConfig WithThreshold(double threshold) const;
  NeuronConfig WithMode(NeuronMode mode) const;

 private:
  double tau_m_ms_;
  double tau_s_ms_;
  double threshold_;
  NeuronMode mode_;
  double v0_;
  double t_peak_;
};

// K(dt); zero for dt <= 0.
double PspKernel(double dt, const NeuronConfig& config);

struct TracePoint {
  double time;
  double voltage;
};

struct SimResult {
  std::vector<double> output_times;
  double t_max = 0.0;
  double v_max = 0.0;
  std::vector<TracePoint> trace;  // empty unless requested
};

struct SimOptions {
  // Stop after this many output spikes (0 = unlimited). t_max/v_max then
  // cover only the simulated prefix.
  std::size_t max_spikes = 0;
  // Sampling step of the dense diagnostic trace (0 = no trace).
  double trace_dt = 0.0;
};

// Input-driven potential U(t) without any reset term.
double UnresetPotential(const SpikePattern& pattern,
                        std::span<const double> weights, double t,
                        const NeuronConfig& config);

// Exact simulation under the configured mode.
//
// MultiSpike: each upward crossing of theta emits a spike whose reset term
// acts for t > t_s. t_max/v_max come from the reset-composed trace.
//
// SingleSpikeShunting: the first crossing emits the only spike; input is no
// longer integrated and V decays as theta*exp(-(t - t_s)/tau_m). t_max/v_max
// come from the full unshunted trace U(t), which is what the tempotron update
// needs on both error types.
//
// Throws InputError on size mismatch or non-finite weights.
SimResult Simulate(const SpikePattern& pattern, std::span<const double> weights,
                   const NeuronConfig& config, const SimOptions& options = {});

struct PeakResult {
  double t_max = 0.0;
  double v_max = 0.0;
};

PeakResult FindTmax(const SpikePattern& pattern,
                    std::span<const double> weights,
                    const NeuronConfig& config);

// Analytic dV/dt at t given the preceding output spikes and the reset
// amplitude theta_star. Input and output spikes count only when strictly
// earlier than t.
double Vdot(const SpikePattern& pattern, std::span<const double> weights,
            double t, std::span<const double> prior_output_times,
            double theta_star, const NeuronConfig& config);

// dU(t)/dw_i = sum_{t_i^j < t} c_i^j K(t - t_i^j) for every afferent.
std::vector<double> PotentialGradient(const SpikePattern& pattern, double t,
                                      const NeuronConfig& config);

// V(t) with the given reset times and reset amplitude.
double ComposedPotential(const SpikePattern& pattern,
                         std::span<const double> weights, double t,
                         std::span<const double> output_times, double theta,
                         const NeuronConfig& config);

// Time of the first local maximum of the composed potential at or after
// t_from, with the given reset history. Used to land on the tangency point of
// a critical threshold.
double FirstPeakAfter(const SpikePattern& pattern,
                      std::span<const double> weights, double t_from,
                      std::span<const double> output_times, double theta,
                      const NeuronConfig& config);

void CheckWeights(const SpikePattern& pattern, std::span<const double> weights);

}  // namespace augspike
