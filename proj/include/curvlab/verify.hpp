#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "curvlab/functional.hpp"
#include "curvlab/graph_io.hpp"

namespace curvlab {

enum class CheckStatus { pass, fail, skip };

const char* to_string(CheckStatus s);

struct TheoremCheckResult {
  std::string theorem;   // e.g. "T3[eps=1/8]"
  std::string instance;
  std::string hypothesis;
  double lhs = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();
  /// Oriented so that margin >= 0 means the inequality lhs <= rhs holds.
  double margin = std::numeric_limits<double>::quiet_NaN();
  CheckStatus status = CheckStatus::skip;
  double runtime = 0.0;  // seconds
  std::string detail;
};

struct VerifyConfig {
  OptimizerConfig opt;
  double check_tol = 1e-8;
  /// Gradient-estimate margins use this absolute floor.
  double commutation_tol = 1e-9;
  int enum_cap = 16;
  int capacity_cap = 12;
  int random_functions = 100;
  std::uint64_t seed = 20240611;
};

struct Instance {
  std::string id;
  GraphSpec spec;
};

/// Registry ids: T1 ... T14 and CX (the counterexample sweep).
const std::vector<std::string>& theorem_ids();
/// Expands "all" and validates ids; throws PreconditionError on unknown ids.
std::vector<std::string> parse_theorem_list(const std::string& csv);

/// Runs the requested checks on one instance. CX ignores the instance.
std::vector<TheoremCheckResult> verify(const Instance& instance, const std::vector<std::string>& theorems,
                                       const VerifyConfig& cfg = {});

/// GEPS(eps) for eps = 1e-1 ... 1e-8: curvature of both edges, monotone
/// decrease of counterexample_ratio, and ratio(1e-8) < 1.
std::vector<TheoremCheckResult> verify_counterexample_program(const VerifyConfig& cfg = {});

/// Paths n <= 8, cycles n <= 12, hypercubes d <= 4, complete n <= 8,
/// monotone birth-death n <= 10, lazifications, the GEPS sweep and a few
/// random graphs without a curvature sign.
std::vector<Instance> default_battery(std::uint64_t seed);

/// Instance-level parallel run; results are concatenated in instance order,
/// with CX (when requested) reported once at the end.
std::vector<TheoremCheckResult> verify_battery(const std::vector<Instance>& instances,
                                               const std::vector<std::string>& theorems, const VerifyConfig& cfg = {});

bool any_failure(const std::vector<TheoremCheckResult>& results);

}  // namespace curvlab
