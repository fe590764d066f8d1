#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace eqp::cli {

enum ExitCode : int { kExitOk = 0, kExitVerificationFailed = 1, kExitConfigError = 2, kExitRuntimeAbort = 3 };

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  std::optional<std::size_t> grid;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<std::size_t> snapshot_stride;
  bool allow_cfl_violation = false;
  unsigned workers = 1;
};

/// Config file (or the built-in default) with command-line overrides applied.
RunConfig resolve_config(const CommandOptions& options);

/// --out, then output_dir from the config, then $EQP_OUT, then "eqp_out".
std::filesystem::path resolve_output_dir(const CommandOptions& options, const RunConfig& config);

std::string snapshot_name(std::size_t step);

// Each command returns an exit code and throws on errors; run_command maps
// exceptions to exit codes and prints them to `err`.
int cmd_build(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_run(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify(const CommandOptions& options, std::ostream& out, std::ostream& err);
/// Empty `times` compares every stored snapshot.
int cmd_compare(const std::filesystem::path& run_dir, const std::vector<double>& times, unsigned workers,
                std::ostream& out, std::ostream& err);

template <typename F>
int run_command(std::ostream& err, F&& body);

}  // namespace eqp::cli

#include "commands_impl.hpp"
