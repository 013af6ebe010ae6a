#pragma once

#include <stdexcept>
#include <string>

namespace augspike {

// Invalid neuron/learner parameters (time constants, rates, probabilities).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input data: non-finite values, size mismatches, bad indices.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parse failures on pattern, image and config files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No threshold produces the requested number of output spikes.
class NoSuchCritical : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An output spike crossed threshold with vanishing slope; the STS gradient
// is undefined there.
class DegenerateCrossing : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Feature occurrences cannot be laid out without overlap.
class PlacementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace augspike
