#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eqp/analytic_solution.hpp"
#include "eqp/error.hpp"

namespace eqp::cli {

/// Bad configuration input; carries the offending key path
/// (e.g. "profile[1].r_max").
class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, const std::string& message)
      : Error(key_path + ": " + message), key_path_(std::move(key_path)) {}
  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

struct StripConfig {
  double a = 0.0;
  double b = 0.0;
  friend bool operator==(const StripConfig&, const StripConfig&) = default;
};

struct ProfileConfig {
  double x = 0.0;
  double y = 0.0;
  double r_max = 0.0;
  double amplitude = 0.0;
  friend bool operator==(const ProfileConfig&, const ProfileConfig&) = default;
};

/// Everything a run needs; fully deterministic (no seeds).
struct RunConfig {
  std::size_t grid = 256;
  double dt = 1e-3;
  double t_end = 1.0;
  std::size_t snapshot_stride = 100;
  double cfl_cap = 0.5;
  std::string output_dir;
  std::vector<StripConfig> strips;
  std::vector<double> gap_amplitudes;
  std::vector<ProfileConfig> profiles;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Values recorded by a build or run next to the configuration.
struct DerivedInfo {
  std::vector<double> velocities;
  std::vector<double> effective_gap_amplitudes;
  std::vector<std::pair<std::size_t, std::size_t>> commensurate_pairs;
  unsigned workers = 1;
};

struct Manifest {
  RunConfig config;
  DerivedInfo derived;
};

/// The two-strip, two-profile configuration used by the acceptance suite.
RunConfig default_config();

/// Parses the `key = value` format with `#` comments and repeated
/// [strip] / [profile] sections. A [derived] section is accepted and
/// ignored. Throws ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Lossless: parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

std::string serialize_manifest(const Manifest& manifest);
Manifest parse_manifest(std::string_view text);
Manifest load_manifest(const std::filesystem::path& path);

/// Builds the flow, profiles and solution, reporting precondition failures
/// as ConfigError with the offending key path.
ShearFlow build_flow(const RunConfig& config);
std::vector<RadialProfile> build_profiles(const RunConfig& config);
QuasiPeriodicSolution build_solution(const RunConfig& config);

DerivedInfo derive_info(const QuasiPeriodicSolution& solution, unsigned workers);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace eqp::cli
