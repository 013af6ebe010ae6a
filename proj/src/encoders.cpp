#include "augspike/encoders.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "augspike/patterns.hpp"

namespace augspike {

LatencyAssignment BuildAssignment(std::size_t n_units, double window,
                                  std::uint64_t seed) {
  if (n_units == 0) throw ParameterError("encoder needs at least one unit");
  if (!(window > 0.0)) throw ParameterError("encoding window must be > 0");
  Rng rng(seed);
  std::uniform_real_distribution<double> when(0.0, window);
  LatencyAssignment a;
  a.window = window;
  a.times.resize(n_units);
  for (auto& t : a.times) t = when(rng);
  return a;
}

SpikePattern Encode(const ActivationMap& map,
                    const LatencyAssignment& assignment, int label) {
  if (map.values.size() != assignment.times.size()) {
    throw InputError("activation map has " + std::to_string(map.values.size()) +
                     " units, assignment has " +
                     std::to_string(assignment.times.size()));
  }
  std::vector<AugmentedSpike> spikes;
  for (std::size_t u = 0; u < map.values.size(); ++u) {
    const double a = map.values[u];
    if (!std::isfinite(a)) throw InputError("activation values must be finite");
    if (a > map.threshold) spikes.push_back({u, assignment.times[u], a});
  }
  return SpikePattern(map.values.size(), assignment.window, std::move(spikes),
                      label);
}

std::vector<LabeledImage> ReadImages(std::istream& is) {
  std::string line;
  auto next = [&]() {
    while (std::getline(is, line)) {
      const auto p = line.find_first_not_of(" \t\r");
      if (p != std::string::npos && line[p] != '#') return true;
    }
    return false;
  };
  if (!next()) throw FormatError("image file is empty");
  std::istringstream header(line);
  std::string key;
  std::size_t count = 0, rows = 0, cols = 0;
  if (!(header >> key >> count >> rows >> cols) || key != "images") {
    throw FormatError("image file: expected 'images <count> <rows> <cols>'");
  }
  std::vector<LabeledImage> images;
  images.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    if (!next()) throw FormatError("image file: truncated");
    std::istringstream ss(line);
    LabeledImage img;
    img.rows = rows;
    img.cols = cols;
    img.pixels.resize(rows * cols);
    if (!(ss >> img.label)) throw FormatError("image file: missing label");
    for (auto& p : img.pixels) {
      if (!(ss >> p)) throw FormatError("image file: short pixel row");
    }
    images.push_back(std::move(img));
  }
  return images;
}

std::vector<LabeledImage> ReadImagesFile(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path.string());
  return ReadImages(is);
}

ActivationMap NormalizedActivation(const LabeledImage& image,
                                   double threshold_fraction) {
  ActivationMap map;
  map.rows = image.rows;
  map.cols = image.cols;
  map.values = image.pixels;
  const double peak =
      map.values.empty() ? 0.0 : *std::max_element(map.values.begin(), map.values.end());
  if (peak > 0.0) {
    for (auto& v : map.values) v /= peak;
  }
  map.threshold = threshold_fraction;
  return map;
}

}  // namespace augspike
