#pragma once

// Plain-text pattern files.
//
//   pattern
//   n_afferents 500
//   window_s 0.5
//   label 1
//   spikes 3
//   0 0.01234567890123456 1.5
//   ...
//   end
//
// One record per spike: afferent index, time in seconds (17 significant
// digits), coefficient. Writers emit canonical (time, afferent) order; readers
// accept any order and re-sort. A file may hold several pattern blocks; lines
// starting with '#' are comments.

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "augspike/spike_core.hpp"

namespace augspike {

void WritePattern(std::ostream& os, const SpikePattern& pattern);
void WritePatterns(std::ostream& os, const std::vector<SpikePattern>& patterns);
void WritePatternsFile(const std::filesystem::path& path,
                       const std::vector<SpikePattern>& patterns);

// Reads every pattern block in the stream. Throws FormatError.
std::vector<SpikePattern> ReadPatterns(std::istream& is);
std::vector<SpikePattern> ReadPatternsFile(const std::filesystem::path& path);

}  // namespace augspike
