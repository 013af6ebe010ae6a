#pragma once

// JSON configuration of the experiment protocols. Every config field is
// optional in the file; absent fields keep their per-experiment defaults and
// unknown keys are rejected with FormatError.

#include <cstdint>
#include <optional>
#include <string>

#include "augspike/experiments.hpp"
#include "json.hpp"

namespace augspike::experiments {

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  // Restores the full run counts and network sizes of the original protocols
  // where the desk defaults are reduced.
  bool paper_scale = false;
};

struct ExperimentOutcome {
  Report report;
  std::uint64_t seed = 0;
  std::size_t runs = 0;
  // Fully resolved configuration, defaults and overrides included.
  nlohmann::json resolved;
};

// Reads the "experiment" key of a config document; throws FormatError when
// it is missing or not a string.
ExperimentId ExperimentOf(const nlohmann::json& doc);

// Parses the config for `id` (the "experiment" key, when present, must name
// the same experiment), applies overrides and runs it.
ExperimentOutcome RunFromConfig(ExperimentId id, const nlohmann::json& doc,
                                const RunOverrides& overrides);

// Parsed config for `id` with defaults filled in, without running it.
nlohmann::json ResolveConfig(ExperimentId id, const nlohmann::json& doc);

// Parsers, exposed for tests and tooling.
Classify3Config ParseClassify3(const nlohmann::json& doc);
CapacityConfig ParseCapacity(const nlohmann::json& doc);
PsdConfig ParsePsd(const nlohmann::json& doc);
FeatureConfig ParseFeature(const nlohmann::json& doc);
RobustnessConfig ParseRobustness(const nlohmann::json& doc);
VisualConfig ParseVisual(const nlohmann::json& doc);

}  // namespace augspike::experiments
