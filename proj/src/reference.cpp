#include "augspike/reference.hpp"

#include <cmath>

namespace augspike::reference {

SimResult SimulateDenseGrid(const SpikePattern& pattern,
                            std::span<const double> weights,
                            const NeuronConfig& config, double dt) {
  CheckWeights(pattern, weights);
  if (!(dt > 0.0)) throw ParameterError("grid step must be positive");
  const double tau_m = config.tau_m();
  const double tau_s = config.tau_s();
  const double decay_m = std::exp(-dt / tau_m);
  const double decay_s = std::exp(-dt / tau_s);
  const double theta = config.threshold();
  const bool shunting = config.mode() == NeuronMode::kSingleSpikeShunting;
  const auto spikes = pattern.spikes();
  const auto n_steps =
      static_cast<long>(std::floor(pattern.window() / dt + 1e-9));

  SimResult out;
  double slow = 0.0, fast = 0.0, resets = 0.0;
  double v_prev = 0.0;
  std::size_t next = 0;
  bool fired = false;

  for (long k = 1; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    slow *= decay_m;
    fast *= decay_s;
    resets *= decay_m;
    while (next < spikes.size() && spikes[next].time < t) {
      const auto& s = spikes[next];
      const double amp = weights[s.afferent] * s.coefficient;
      slow += amp * std::exp(-(t - s.time) / tau_m);
      fast += amp * std::exp(-(t - s.time) / tau_s);
      ++next;
    }
    const double u = config.v0() * (slow - fast);
    const double v = u - theta * resets;

    // Shunting reports the peak of U; multi-spike the composed trace.
    const double tracked = shunting ? u : v;
    if (tracked > out.v_max) {
      out.v_max = tracked;
      out.t_max = t;
    }

    if (!(shunting && fired) && v >= theta && v_prev < theta) {
      const double frac = (theta - v_prev) / (v - v_prev);
      const double tc = t - dt + frac * dt;
      out.output_times.push_back(tc);
      fired = true;
      if (!shunting) {
        resets += std::exp(-(t - tc) / tau_m);
        v_prev = u - theta * resets;
        continue;
      }
    }
    v_prev = v;
  }
  return out;
}

}  // namespace augspike::reference
