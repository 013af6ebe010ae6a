#include "augspike/pattern_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace augspike {
namespace {

bool NextLine(std::istream& is, std::string& line, int& line_no) {
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

[[noreturn]] void Fail(int line_no, const std::string& what) {
  throw FormatError("pattern file line " + std::to_string(line_no) + ": " +
                    what);
}

template <typename T>
T ReadKeyed(std::istream& is, const char* key, int& line_no) {
  std::string line;
  if (!NextLine(is, line, line_no)) Fail(line_no, std::string("missing ") + key);
  std::istringstream ss(line);
  std::string k;
  T value{};
  if (!(ss >> k >> value) || k != key) {
    Fail(line_no, std::string("expected '") + key + " <value>'");
  }
  return value;
}

}  // namespace

void WritePattern(std::ostream& os, const SpikePattern& pattern) {
  os << "pattern\n"
     << "n_afferents " << pattern.n_afferents() << '\n'
     << "window_s " << std::setprecision(17) << pattern.window() << '\n'
     << "label " << pattern.label() << '\n'
     << "spikes " << pattern.size() << '\n';
  for (const auto& s : pattern.spikes()) {
    os << s.afferent << ' ' << std::setprecision(17) << s.time << ' '
       << s.coefficient << '\n';
  }
  os << "end\n";
}

void WritePatterns(std::ostream& os, const std::vector<SpikePattern>& patterns) {
  for (const auto& p : patterns) WritePattern(os, p);
}

void WritePatternsFile(const std::filesystem::path& path,
                       const std::vector<SpikePattern>& patterns) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  WritePatterns(os, patterns);
}

std::vector<SpikePattern> ReadPatterns(std::istream& is) {
  std::vector<SpikePattern> out;
  std::string line;
  int line_no = 0;
  while (NextLine(is, line, line_no)) {
    if (line.rfind("pattern", 0) != 0) Fail(line_no, "expected 'pattern'");
    const auto n = ReadKeyed<std::size_t>(is, "n_afferents", line_no);
    const auto window = ReadKeyed<double>(is, "window_s", line_no);
    const auto label = ReadKeyed<int>(is, "label", line_no);
    const auto count = ReadKeyed<std::size_t>(is, "spikes", line_no);
    std::vector<AugmentedSpike> spikes;
    spikes.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
      if (!NextLine(is, line, line_no)) Fail(line_no, "truncated spike list");
      std::istringstream ss(line);
      AugmentedSpike s;
      if (!(ss >> s.afferent >> s.time >> s.coefficient)) {
        Fail(line_no, "malformed spike record");
      }
      spikes.push_back(s);
    }
    if (!NextLine(is, line, line_no) || line.rfind("end", 0) != 0) {
      Fail(line_no, "expected 'end'");
    }
    try {
      out.emplace_back(n, window, std::move(spikes), label);
    } catch (const InputError& e) {
      Fail(line_no, e.what());
    }
  }
  return out;
}

std::vector<SpikePattern> ReadPatternsFile(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path.string());
  return ReadPatterns(is);
}

}  // namespace augspike
