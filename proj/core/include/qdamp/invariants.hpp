#pragma once

#include <string>
#include <vector>

#include "qdamp/types.hpp"

namespace qdamp {

struct InvariantResult {
  std::string module_name;
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;  ///< NaN for report-only rows (always pass)
};

/// Test hook: a non-empty target perturbs that invariant's input so the run
/// fails exactly there. Known targets: slicing_identity, kernel_roundtrip,
/// free_reduction.
struct FaultInjection {
  std::string target;
};

/// Every module's invariant suite at the standard parameters
/// (kappa = 0.6, hbar = 1, v0 = 5, theta0 = 1/2).
std::vector<InvariantResult> run_invariants(const FaultInjection& fault = {});

}  // namespace qdamp
