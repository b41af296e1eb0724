#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bpb/json_io.hpp"

namespace bpb {

/// Verification batteries; each id names the statement it exercises.
const std::vector<std::string>& suite_ids();

struct SuiteConfig {
  std::string id;
  std::vector<LpSpace> spaces;
  std::vector<double> eps_grid;
  /// Fractions of |T|; every entry lies in (0, 1).
  std::vector<double> delta_grid;
  int trials = 0;
  int n_max = 0;
  std::uint64_t seed = 0;
  ToleranceConfig tol;

  /// Throws InvalidConfig on an unknown id, empty or unsorted grids,
  /// non-positive entries or negative counts.
  void validate() const;
};

/// Defaults sized for the acceptance run of each suite.
SuiteConfig default_suite_config(const std::string& id);

enum class Status { Pass, Fail, Inconclusive };

const char* to_string(Status s);

struct Assertion {
  std::string name;
  Status status = Status::Pass;
  int checked = 0;
  int failed = 0;
  int inconclusive = 0;
  std::string detail;
  /// First offending case, null when none.
  Json witness;
};

struct SuiteReport {
  std::string suite;
  SuiteConfig config;
  std::vector<Assertion> assertions;
  /// Suite-specific tables (decay table, isometry constants, ...).
  Json data;
  double wall_clock_seconds = 0.0;

  /// Fail if any assertion failed, else Inconclusive if any was, else Pass.
  Status overall() const;
  bool passed() const { return overall() == Status::Pass; }
};

SuiteReport run_suite(const SuiteConfig& cfg);

enum class ReportFormat { Json, Text };

Json to_json(const SuiteConfig& cfg);
/// Wall-clock time is left out unless requested so reruns compare equal.
Json report_to_json(const SuiteReport& report, bool include_timing = false);
std::string emit_report(const SuiteReport& report, ReportFormat format, bool include_timing = false);

}  // namespace bpb
