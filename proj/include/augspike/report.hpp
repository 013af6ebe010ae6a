#pragma once

// Tab-separated result tables and a flat key/value summary per experiment.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace augspike {

std::string Cell(double value);
std::string Cell(std::size_t value);
std::string Cell(int value);
inline std::string Cell(std::string value) { return value; }
inline std::string Cell(const char* value) { return value; }

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  template <typename... Ts>
  void Add(const Ts&... values) {
    rows.push_back({Cell(values)...});
  }
};

struct Report {
  std::string experiment;
  std::vector<Table> tables;
  std::vector<std::pair<std::string, std::string>> summary;

  template <typename T>
  void Set(std::string key, const T& value) {
    summary.emplace_back(std::move(key), Cell(value));
  }
  // Value of a summary key; throws std::out_of_range when absent.
  const std::string& Get(const std::string& key) const;
};

// Writes <name>.tsv per table and summary.tsv into dir (created if needed).
// Every file starts with '#' header lines carrying the given preamble.
void WriteReport(const Report& report, const std::filesystem::path& dir,
                 const std::vector<std::string>& preamble = {});

}  // namespace augspike
