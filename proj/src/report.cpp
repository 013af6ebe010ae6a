#include "augspike/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "augspike/errors.hpp"

namespace augspike {

std::string Cell(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

std::string Cell(std::size_t value) { return std::to_string(value); }
std::string Cell(int value) { return std::to_string(value); }

const std::string& Report::Get(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  throw std::out_of_range("no summary key '" + key + "'");
}

namespace {

void WriteTable(const std::filesystem::path& path,
                const std::vector<std::string>& preamble,
                const std::vector<std::string>& columns,
                const std::vector<std::vector<std::string>>& rows) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot write " + path.string());
  for (const auto& line : preamble) os << "# " << line << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) {
    os << (c ? "\t" : "") << columns[c];
  }
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "\t" : "") << row[c];
    os << '\n';
  }
}

}  // namespace

void WriteReport(const Report& report, const std::filesystem::path& dir,
                 const std::vector<std::string>& preamble) {
  std::filesystem::create_directories(dir);
  for (const auto& t : report.tables) {
    WriteTable(dir / (t.name + ".tsv"), preamble, t.columns, t.rows);
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& [k, v] : report.summary) rows.push_back({k, v});
  WriteTable(dir / "summary.tsv", preamble, {"key", "value"}, rows);
}

}  // namespace augspike
