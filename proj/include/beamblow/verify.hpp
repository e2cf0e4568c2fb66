#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace beamblow {

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  // Test hook: perturbs the biharmonic stencil seen by the Green-identity
  // suite, which must then fail.
  bool corrupt_stencil = false;
};

struct SuiteResult {
  std::string name;
  bool passed = true;
  // One line per check, prefixed PASS or FAIL.
  std::vector<std::string> lines;
  double seconds = 0.0;
};

SuiteResult green_identity_suite(const VerifyOptions& options);
SuiteResult eigenvalue_benchmark_suite(const VerifyOptions& options);
SuiteResult energy_residual_order_suite(const VerifyOptions& options);
SuiteResult lemma21_suite(const VerifyOptions& options);
SuiteResult chain_consistency_suite(const VerifyOptions& options);
SuiteResult sandwich_suite(const VerifyOptions& options);

// All suites in the order above; each verdict is printed to `progress` as it
// finishes when non-null.
std::vector<SuiteResult> verify(const VerifyOptions& options, std::ostream* progress = nullptr);

}  // namespace beamblow
