#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "t2x/config.hpp"
#include "t2x/correlate.hpp"

namespace t2x {

struct RunOptions {
  double grid_scale = 1.0;
  CorrelationPath path = CorrelationPath::fast;
  int threads = 0; ///< 0: hardware concurrency
  std::filesystem::path object;     ///< `image` only
  std::filesystem::path config_dir; ///< base for relative material files
  std::string sweep_key;            ///< overrides [sweep] key when set
  std::vector<double> sweep_values; ///< overrides [sweep] values when non-empty
};

struct RunResult {
  int exit_code = 0;
  std::string error; ///< single-line JSON object, empty on success
  std::vector<std::filesystem::path> files;
};

/// Exit codes: 0 ok, 2 configuration or usage, 3 numerical domain, 4 I/O.
enum ExitCode { exit_ok = 0, exit_config = 2, exit_domain = 3, exit_io = 4 };

std::vector<std::string> subcommands();

/// Runs one subcommand and writes its file set into `out_dir`. Never throws:
/// failures remove the files written so far and are reported in the result.
RunResult run(const std::string& subcommand, const RunConfig& cfg, const std::filesystem::path& out_dir,
              const RunOptions& options = {});

/// Maps the in-flight exception to an exit code and a one-line JSON error.
RunResult error_result(std::exception_ptr e);

} // namespace t2x
