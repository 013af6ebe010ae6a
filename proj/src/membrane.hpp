#pragma once

// Internal segment-wise machinery shared by the simulator and the STS code.

#include <cstddef>
#include <span>
#include <vector>

#include "augspike/spike_core.hpp"

namespace augspike::detail {

// One weighted input event: amplitude = w_i * c_i^j.
struct Event {
  double time;
  double amplitude;
};

// Weighted events in canonical time order; zero-amplitude events are dropped
// since they contribute neither value nor slope.
std::vector<Event> BuildEvents(const SpikePattern& pattern,
                               std::span<const double> weights);

struct ScanResult {
  std::vector<double> crossings;
  double t_max = 0.0;
  double v_max = 0.0;
  // Highest local maximum of V that stays below theta, including the value
  // at the window end: the level at which a lower threshold adds a crossing.
  double sub_peak = 0.0;
};

// Marches the event segments of [0, window].
//   reset = true : every crossing subtracts theta*exp(-(t - t_s)/tau_m);
//                  stops after stop_after crossings when stop_after > 0.
//   reset = false: reports only the first crossing but keeps tracking the
//                  maximum of U over the whole window.
ScanResult Scan(std::span<const Event> events, double window, double theta,
                bool reset, std::size_t stop_after, const NeuronConfig& config);

}  // namespace augspike::detail
