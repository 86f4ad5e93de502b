#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "odetree/config.hpp"
#include "odetree/lifetime_density.hpp"
#include "odetree/reference_solutions.hpp"

namespace odetree {

struct CliOptions {
  std::optional<std::uint64_t> seed;  // overrides the config seed
  std::optional<int> workers;
  std::string out_path;  // CSV destination; stdout when empty
  bool warn_only = false;  // downgrade verdict failures to warnings
};

BuiltinProblem problem_from_config(const Config& cfg);
LifetimeDensity density_from_config(const Config& cfg);

// Subcommands. Each writes primary output (CSV or report) to `out` and
// human-readable status lines to `log`, and returns a process exit code:
// 0 on success with all verdicts passing, 1 on verdict failure (unless
// warn_only), 2 on configuration or runtime errors.
int cmd_solve(const Config& cfg, const CliOptions& opt, std::ostream& out,
              std::ostream& log);
int cmd_certify(const Config& cfg, const CliOptions& opt, std::ostream& out,
                std::ostream& log);
int cmd_progeny(const Config& cfg, const CliOptions& opt, std::ostream& out,
                std::ostream& log);
int cmd_butcher_check(const Config& cfg, const CliOptions& opt,
                      std::ostream& out, std::ostream& log);

// Shared entry point used by the binary; dispatches on the subcommand
// name and honors --out by redirecting `out` to the file.
int run_cli(const std::string& subcommand, const std::string& config_path,
            const CliOptions& opt, std::ostream& console,
            std::ostream& errors);

}  // namespace odetree
