#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "radblow/app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Radial Euler / Euler-Poisson blow-up laboratory"};
  app.require_subcommand(1);

  std::string config, out_dir, store;
  bool force = false;
  int jobs = 1;
  std::uint64_t seed = 0;
  int trials = 200;

  auto* run = app.add_subcommand("run", "Integrate one configuration and write series.csv + summary.json");
  run->add_option("config", config, "Config file (JSON)")->required();
  run->add_option("-o,--output", out_dir, "Output directory")->required();
  run->add_flag("--force", force, "Overwrite existing outputs");

  auto* sweep = app.add_subcommand("sweep", "Run an eps sweep and fit T_num ~ eps^slope");
  sweep->add_option("config", config, "Config file (JSON) with eps_list")->required();
  sweep->add_option("-o,--output", out_dir, "Output directory")->required();
  sweep->add_flag("--force", force, "Overwrite existing outputs");
  sweep->add_option("--jobs", jobs, "Rows computed concurrently");

  auto* check = app.add_subcommand("check-inequalities", "Weighted Hardy inequality property suite");
  check->add_option("--seed", seed, "Pseudo-random seed")->required();
  check->add_option("--trials", trials, "Number of random trials")->required();

  auto* report = app.add_subcommand("report", "Tabulate a sweep record store");
  report->add_option("store", store, "Record store (runs.jsonl)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : radblow::kExitUsage;
  }

  if (*run) return radblow::cmd_run(config, out_dir, force, std::cout, std::cerr);
  if (*sweep) return radblow::cmd_sweep(config, out_dir, force, jobs, std::cout, std::cerr);
  if (*check) return radblow::cmd_check_inequalities(seed, trials, std::cout, std::cerr);
  if (*report) return radblow::cmd_report(store, std::cout, std::cerr);
  return radblow::kExitUsage;
}
