// tubecheck: run a tube-domain verification scenario or list fixtures.
//
//   tubecheck run <config> [--out <dir>] [--seed <u64>]
//   tubecheck fixtures
//
// Exit status: 0 pass, 1 fail or witness, 2 config or runtime error.

#include "tubes/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for tube domains, their envelopes and covers"};
  app.require_subcommand(1);

  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run the scenario described by a config file");
  run->add_option("config", config, "Scenario config")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Directory for report.json and CSV side files");
  run->add_option("--seed", seed, "Seed overriding the config");

  app.add_subcommand("fixtures", "List built-in fixtures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (app.got_subcommand("fixtures")) {
    std::cout << tubes::fixture_listing();
    return 0;
  }

  std::string diagnostic;
  const tubes::ExitCode code = tubes::run_scenario_file(config, out, seed, diagnostic);
  if (code == tubes::ExitCode::Error) {
    std::cerr << "tubecheck: " << diagnostic << '\n';
  } else {
    std::cout << (code == tubes::ExitCode::Pass ? "pass" : "fail") << ": " << out << "/report.json\n";
  }
  return static_cast<int>(code);
}
