#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace mvfp {

struct SelftestOptions {
  std::uint64_t seed = 20240601;
  int cross_check_plans = 200;
  int fd_points = 1000;        // smooth points per instance size
  int legalizer_cases = 1000;  // randomized near-legal placements
  int norm_operations = 10000; // probability-column updates
  // test fixture: corrupts the overlap reference so the cross-check must trip
  bool corrupt_overlap_reference = false;
};

struct CheckOutcome {
  std::string name;
  bool pass = false;
  std::string details;
  double seconds = 0;
};

// The invariant suites: objective cross-checks, probability-model norm
// preservation, subgradients vs. finite differences (sizes 10 and 50), and
// the legalizer oracle.
std::vector<CheckOutcome> run_selftest_checks(const SelftestOptions& options);

// Runs the suites and prints one table row per check; returns 0 when
// everything passes.
int run_selftest(const SelftestOptions& options, std::ostream& out);

}  // namespace mvfp
