// sim: command-line front end for the Y-Flash Tsetlin machine co-simulator.
//
//   sim <experiment> [--config FILE] [--seed N] [--out DIR]
//   sim verify [--seed N]
//   sim print-defaults

#include <algorithm>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "yflash/acceptance.hpp"
#include "yflash/config.hpp"
#include "yflash/errors.hpp"
#include "yflash/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Y-Flash in-memory Tsetlin machine co-simulator"};
  app.require_subcommand(1);

  struct RunArgs {
    std::string config;
    std::uint64_t seed = 1;
    std::string out = "out";
  };
  RunArgs args;

  const std::pair<const char*, const char*> experiments[] = {
      {"staircase", "multi-state program/erase staircase"},
      {"endurance", "cycle-to-cycle endurance sweep"},
      {"d2d", "device-to-device population statistics"},
      {"xor-map", "XOR training with automata mapped onto cells"},
      {"energy", "per-mode power and energy table"},
      {"train", "software-only XOR training"},
  };
  for (const auto& [name, help] : experiments) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config, "flat key = value parameter file");
    sub->add_option("--seed", args.seed, "random seed")->capture_default_str();
    sub->add_option("--out", args.out, "output directory")->capture_default_str();
  }
  std::uint64_t verify_seed = 1;
  CLI::App* verify = app.add_subcommand("verify", "run every acceptance check; nonzero exit on failure");
  verify->add_option("--seed", verify_seed, "seed for single-run checks")->capture_default_str();
  app.add_subcommand("print-defaults", "print every configuration key with its default value");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    if (name == "print-defaults") {
      std::cout << yflash::dump_config(yflash::SimConfig{});
      return 0;
    }
    if (name == "verify") {
      const auto results = yflash::run_acceptance(std::cout, verify_seed);
      const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; });
      std::cout << (failed == 0 ? "all acceptance checks passed\n" : std::to_string(failed) + " acceptance check(s) failed\n");
      return failed == 0 ? 0 : 1;
    }
    yflash::SimConfig cfg;
    if (!args.config.empty()) yflash::apply_config_file(cfg, args.config);
    const auto experiment = yflash::parse_experiment(name);
    std::cout << yflash::run_to_directory(*experiment, cfg, args.seed, args.out);
    return 0;
  } catch (const yflash::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
