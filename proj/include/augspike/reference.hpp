#pragma once

// Serial dense-grid simulator. It shares no code with the event-driven path
// and is kept as the independent reference for equivalence checks and
// benchmarks.

#include <span>

#include "augspike/spike_core.hpp"

namespace augspike::reference {

// Advances exact exponential traces on a uniform grid of step dt (seconds).
// A spike is emitted on the first grid point at or above threshold; its time
// is linearly interpolated inside the step and the reset term starts there.
SimResult SimulateDenseGrid(const SpikePattern& pattern,
                            std::span<const double> weights,
                            const NeuronConfig& config, double dt);

}  // namespace augspike::reference
