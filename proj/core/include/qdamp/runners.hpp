#pragma once

#include <string>
#include <vector>

#include "qdamp/comparators.hpp"
#include "qdamp/invariants.hpp"
#include "qdamp/report.hpp"
#include "qdamp/types.hpp"

namespace qdamp {

/// Raised for invalid run configuration; the CLI maps it to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Command { Kernel, Converge, Evolve, Compare, Check };

Command command_from_string(const std::string& s);
const char* command_name(Command c);

/// Inclusive linear range with count points (count = 1 pins start).
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;
  std::vector<double> values() const;
};

/// Fully deterministic run description; there is no seed anywhere.
struct RunConfig {
  Command command = Command::Check;
  DampedParams params;
  double v0 = 5.0;
  Complex theta0 = {0.5, 0.0};
  GridSpec T_grid{1.0, 1.0, 1};
  GridSpec xa_grid{0.0, 0.0, 1};
  GridSpec xb_grid{1.0, 1.0, 1};
  std::vector<int> N_list = {125, 250, 500, 1000, 2000, 4000, 8000};
  std::vector<MethodId> methods = {MethodId::LG, MethodId::KOCHAN, MethodId::CK, MethodId::DGST};
  bool oracle = false;
  SeedKind seed = SeedKind::Hyperbolic;
  int quad_panels = 0;  ///< 0 = auto-sized; small values force an under-resolved grid
  OutputFormat format = OutputFormat::Csv;
  std::string out_path;  ///< empty = stdout
  FaultInjection fault;

  void validate() const;  ///< throws ConfigError with field diagnostics
};

/// Re K, Im K, |K| over the (T, x_a, x_b) grid from the closed kernel.
ResultTable run_kernel(const RunConfig& cfg);

/// Per N: discrete-kernel deviation from the closed form and from the
/// phase-adjusted closed form, worst coefficient deviation, and the remainder
/// sum; fitted convergence orders in the metadata.
ResultTable run_converge(const RunConfig& cfg);

/// Time series of <x>, <v>, theta1, norm (plus quadrature-oracle deltas when
/// cfg.oracle); a row is inserted at the velocity zero crossing when it falls
/// inside the T grid.
ResultTable run_evolve(const RunConfig& cfg);

/// <x> and <v> per method over the T grid; the LG/KOCHAN velocity gap and the
/// asymptotes go to the metadata.
ResultTable run_compare(const RunConfig& cfg);

/// One row per invariant with pass/fail and the measured value. The table is
/// always produced; the CLI exits 2 when any row fails.
ResultTable run_check(const RunConfig& cfg);

ResultTable dispatch(const RunConfig& cfg);

}  // namespace qdamp
