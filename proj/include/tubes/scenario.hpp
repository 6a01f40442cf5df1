#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace tubes {

inline constexpr const char* kToolVersion = "0.1.0";

enum class ExitCode : int { Pass = 0, Fail = 1, Error = 2 };

struct ScenarioOutcome {
  ExitCode exit = ExitCode::Error;
  /// JSON report; empty when the run failed before producing one.
  std::string report;
  /// Side files by name, e.g. "blowup.csv".
  std::map<std::string, std::string> sideFiles;
  std::string diagnostic;
};

/// Runs one scenario from config text. `seed` overrides the config's seed.
/// Never throws: parse and runtime errors come back as ExitCode::Error.
ScenarioOutcome run_scenario(const std::string& configText, std::optional<std::uint64_t> seed = {});

/// Runs and writes report.json plus side files into `outDir`.
ExitCode run_scenario_file(const std::filesystem::path& config, const std::filesystem::path& outDir,
                           std::optional<std::uint64_t> seed, std::string& diagnostic);

/// The report with the wall-clock field removed; the basis for replay
/// comparisons.
std::string comparable_report(const std::string& report);

/// One line per fixture: name, two spaces, description.
std::string fixture_listing();

}  // namespace tubes
