#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "smsguard/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"smsguard - SMS remote access and anti-theft simulator"};
  app.require_subcommand(1);

  std::string scenario_file;
  std::string attach;
  std::string repl_scenario;
  std::string state_dir;
  std::string transcript_path;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Override the scenario seed");
    cmd->add_option("--state-dir", state_dir,
                    "Directory for <msisdn>.device persistence files");
    cmd->add_option("--transcript", transcript_path,
                    "Write the full transcript to this file");
  };

  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", scenario_file, "Scenario file")->required();
  add_common(run);

  auto* repl = app.add_subcommand("repl", "Interactive session");
  repl->add_option("attach", attach, "Number the session sends from")
      ->required();
  repl->add_option("--scenario", repl_scenario,
                   "Scenario file to set the world up first");
  add_common(repl);

  CLI11_PARSE(app, argc, argv);

  smsguard::cli::RunOptions opts;
  opts.seed = seed;
  opts.state_dir = state_dir;
  opts.transcript_path = transcript_path;

  if (run->parsed()) {
    return smsguard::cli::run_scenario_file(scenario_file, opts, std::cout,
                                            std::cerr);
  }
  return smsguard::cli::repl(attach, std::cin, std::cout, std::cerr, opts,
                             repl_scenario);
}
