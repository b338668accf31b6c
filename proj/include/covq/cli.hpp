#pragma once

// Command-line front end: bound sweeps, oracle runs, Willie-state dumps and
// entanglement-breaking reports. All output is machine-readable.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "covq/channel.hpp"
#include "covq/covert_bounds.hpp"
#include "covq/fock_core.hpp"

namespace covq::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kValidationError = 2,
  kVerificationFailure = 3,
};

inline constexpr const char* kCutoffEnvVar = "COVERT_BOSONIC_CUTOFF";

/// Geometric sequence of round counts, "start:stop:points".
struct NRange {
  double start{1};
  double stop{1};
  int points{1};
};

NRange parse_n_range(std::string_view spec);
std::string to_string(const NRange& range);

/// points values start * (stop/start)^(i/(points-1)); both endpoints are exact.
std::vector<double> expand(const NRange& range);

/// Shortest decimal string that parses back to the same double.
std::string format_number(double value);
double parse_number(std::string_view text);

enum class OutputFormat { csv, json };

struct RunConfig {
  ChannelParams channel{};
  double delta{0.0};
  NRange n_range{};
  std::optional<double> modes_per_second;
  FockCutoff cutoff{kDefaultCutoff};
  OutputFormat output_format{OutputFormat::csv};
  std::string output_path;  // empty: standard output
};

/// Column names of the bounds table, units in the suffix.
std::vector<std::string> bounds_columns(bool with_seconds);

/// Bounds table with a "# key=value" parameter header. Throws Error(domain)
/// if any row has upper < lower.
std::string bounds_csv(const RunConfig& config, std::span<const BoundsPoint> rows);
std::string bounds_json(const RunConfig& config, std::span<const BoundsPoint> rows);

/// Computes the sweep for `config` and renders it in its output format.
std::string render_bounds(const RunConfig& config);

/// Runs the `covert-bosonic` command line. Data goes to `out` (or --out),
/// errors to `err` as one JSON object.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace covq::cli
