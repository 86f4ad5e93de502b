#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "odetree/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo ODE solver over random branching trees, with "
               "integrability certification"};
  app.require_subcommand(1);

  std::string config_path;
  odetree::CliOptions opt;
  std::uint64_t seed = 0;
  int workers = 0;
  bool have_seed = false, have_workers = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration file")
        ->required();
    sub->add_option("--seed", seed, "override the config seed")
        ->each([&](const std::string&) { have_seed = true; });
    sub->add_option("--out", opt.out_path, "write primary output to a file");
    sub->add_option("--workers", workers, "worker thread count (0 = auto)")
        ->each([&](const std::string&) { have_workers = true; });
    sub->add_flag("--warn-only", opt.warn_only,
                  "downgrade verdict failures to warnings (exit 0)");
  };

  CLI::App* solve = app.add_subcommand("solve", "Monte Carlo solve over a t grid (CSV)");
  CLI::App* certify = app.add_subcommand("certify", "evaluate certification thresholds (report)");
  CLI::App* progeny = app.add_subcommand("progeny", "progeny law, dominance and weighted-progeny checks");
  CLI::App* butcher = app.add_subcommand("butcher-check", "tree extraction and series cross-checks");
  for (CLI::App* sub : {solve, certify, progeny, butcher}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  if (have_seed) opt.seed = seed;
  if (have_workers) opt.workers = workers;

  std::string name;
  if (solve->parsed()) name = "solve";
  if (certify->parsed()) name = "certify";
  if (progeny->parsed()) name = "progeny";
  if (butcher->parsed()) name = "butcher-check";

  return odetree::run_cli(name, config_path, opt, std::cout, std::cerr);
}
