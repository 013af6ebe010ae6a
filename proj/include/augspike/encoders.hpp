#pragma once

// Static-image to augmented-spike encoding: each encoding unit whose
// activation exceeds threshold fires once, at a per-unit time frozen for the
// whole dataset, carrying its activation as the spike coefficient.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "augspike/spike_core.hpp"

namespace augspike {

struct ActivationMap {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major
  double threshold = 0.1;

  std::size_t size() const { return values.size(); }
};

struct LatencyAssignment {
  std::vector<double> times;  // seconds, one per unit
  double window = 0.1;
};

LatencyAssignment BuildAssignment(std::size_t n_units, double window,
                                  std::uint64_t seed);

// Throws InputError when the unit counts differ or values are not finite.
SpikePattern Encode(const ActivationMap& map,
                    const LatencyAssignment& assignment, int label = 0);

struct LabeledImage {
  int label = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> pixels;  // row-major
};

// Image file: header "images <count> <rows> <cols>", then one line per image:
// label followed by rows*cols intensities. '#' starts a comment line.
std::vector<LabeledImage> ReadImages(std::istream& is);
std::vector<LabeledImage> ReadImagesFile(const std::filesystem::path& path);

// Pixels scaled by the image maximum into [0, 1]; threshold is a fraction of
// that maximum.
ActivationMap NormalizedActivation(const LabeledImage& image,
                                   double threshold_fraction = 0.1);

}  // namespace augspike
