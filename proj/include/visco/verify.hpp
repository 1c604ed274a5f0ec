#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "visco/params.hpp"

namespace visco {

struct SuiteResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst residual
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool all_passed() const;
  nlohmann::json to_json() const;
};

struct VerifyOptions {
  ModelParams params;
  std::uint64_t seed = 1;
  std::set<std::string> suites;  // empty runs every suite
  int grid_n = 16;
  /// Flip the sign of s⁻ while the suites run; the report must then fail.
  bool mutate_kernel = false;
};

/// Names accepted in VerifyOptions::suites.
const std::vector<std::string>& verify_suite_names();

/// Runs the identity and property suites. Failures are report entries, not exceptions.
VerifyReport verify(const VerifyOptions& opt);

/// Worst normalized residual |x'' + a k² x' + b k² x| / max(|x''| + a k²|x'| + b k²|x|)
/// of the three branch factors, by central differences with step h, over the given times.
double factor_ode_residual(double a, double b, double k, const std::vector<double>& times, double h = 1e-4);

}  // namespace visco
