// augspike <experiment> --config <file> [--seed S] [--runs R] [--out DIR]
//          [--paper-scale]

#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "augspike/config.hpp"
#include "augspike/kernels.hpp"
#include "json.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw augspike::FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string Sha256Hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return hex.str();
}

}  // namespace

int main(int argc, char** argv) {
  namespace ex = augspike::experiments;
  CLI::App app{"Augmented-spike learning experiments"};
  app.set_version_flag("--version", kVersion);

  std::string experiment;
  std::filesystem::path config_path;
  std::filesystem::path out_dir = "results";
  std::uint64_t seed = 0;
  std::size_t runs = 0;
  bool paper_scale = false;
  std::string log_level = "info";

  app.add_option("experiment", experiment,
                 "classify3 | capacity | psd_timing | causality | "
                 "feature_detect | robustness | visual")
      ->required();
  app.add_option("--config", config_path, "JSON config file")
      ->required()
      ->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Base seed override");
  auto* runs_opt = app.add_option("--runs", runs, "Run count override")
                       ->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Output directory (default: results)");
  app.add_flag("--paper-scale", paper_scale,
               "Full-size networks and run counts where the defaults are reduced");
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    const auto id = ex::ParseExperimentId(experiment);
    const std::string text = ReadFile(config_path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw augspike::FormatError(config_path.string() + ": " + e.what());
    }

    ex::RunOverrides overrides;
    if (*seed_opt) overrides.seed = seed;
    if (*runs_opt) overrides.runs = runs;
    overrides.paper_scale = paper_scale;

    spdlog::info("running {} from {} on {} thread(s)", experiment,
                 config_path.string(), augspike::HardwareThreads());
    const auto start = std::chrono::steady_clock::now();
    const auto outcome = ex::RunFromConfig(id, doc, overrides);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();

    const std::string hash = Sha256Hex(text);
    const std::vector<std::string> preamble{
        "experiment " + experiment,
        "seed " + std::to_string(outcome.seed),
        "runs " + std::to_string(outcome.runs),
        "config_sha256 " + hash,
        "augspike " + std::string(kVersion),
    };
    augspike::WriteReport(outcome.report, out_dir, preamble);

    nlohmann::json manifest;
    manifest["experiment"] = experiment;
    manifest["version"] = kVersion;
    manifest["config_file"] = config_path.string();
    manifest["config_sha256"] = hash;
    manifest["seed"] = outcome.seed;
    manifest["runs"] = outcome.runs;
    manifest["paper_scale"] = paper_scale;
    manifest["resolved_config"] = outcome.resolved;
    std::vector<std::string> files;
    for (const auto& t : outcome.report.tables) files.push_back(t.name + ".tsv");
    files.push_back("summary.tsv");
    manifest["tables"] = files;
    {
      std::ofstream os(out_dir / "manifest.json");
      os << manifest.dump(2) << '\n';
    }

    for (const auto& [k, v] : outcome.report.summary) {
      std::cout << k << '\t' << v << '\n';
    }
    spdlog::info("done in {:.1f} s, results in {}", wall, out_dir.string());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
