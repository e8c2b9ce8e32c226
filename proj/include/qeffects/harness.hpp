#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qeffects/linalg.hpp"

namespace qeffects {

/// Every suite tag accepted by TrialConfig, in canonical order.
const std::vector<std::string>& suite_tags();
/// One-line description of what a suite asserts.
const char* suite_description(const std::string& tag);

struct TrialConfig {
  std::vector<Index> dims{2, 3};
  int trials = 10;
  std::uint64_t seed = 0;
  Tolerance tolerance;
  std::vector<std::string> suites;
  /// Informational counterexample search per dim >= 2; 0 disables it.
  int search_budget = 0;

  /// Throws InvalidArgument on dims outside [1, 8], trials < 1, unknown or
  /// repeated suite tags, or a bad tolerance.
  void validate() const;
};

struct TrialOutcome {
  bool passed = true;
  double residual = 0.0;
  std::string detail;
};

struct FailureRecord {
  Index dim = 0;
  int trial = 0;
  std::uint64_t seed = 0;  // trial seed; run_trial(tag, dim, trial, seed, tol) reproduces it
  double residual = 0.0;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  int trials_run = 0;
  int failures = 0;
  double worst_residual = 0.0;
  std::vector<FailureRecord> failure_records;  // sorted by (dim, trial)
  double elapsed_ms = 0.0;
};

struct SearchRecord {
  Index dim = 0;
  int budget = 0;
  bool found = false;
  int trial = -1;
  double comm_residual = 0.0;
  double fixed_residual = 0.0;
};

struct SuiteReport {
  TrialConfig config;
  std::vector<SuiteResult> suites;     // in config order
  std::vector<SearchRecord> searches;  // informational only
  int total_failures() const;
};

/// Seed of one trial, independent of which other suites run.
std::uint64_t trial_seed(std::uint64_t base, const std::string& tag, Index dim, int trial);

/// A single trial. Exceptions from the checks are reported as failures.
TrialOutcome run_trial(const std::string& tag, Index dim, int trial, std::uint64_t seed,
                       const Tolerance& tol = {});

SuiteReport run_suite(const TrialConfig& config);

}  // namespace qeffects
