#pragma once

#include <utility>

#include "qdamp/types.hpp"

namespace qdamp {

/// Base coefficients of the short-time propagator for one slice of duration eps:
/// b0 = 1/(2 eps), R0 = S0 = kappa^2 Lambda eps / 2, and
/// a0 = b0 (1 + 2 (kappa eps / 2)^2)  (polynomial seed) or
/// a0 = b0 cosh(kappa eps)            (hyperbolic seed, default).
SliceCoefficients short_time_coeffs(const DampedParams& p, double eps, double Lambda,
                                    SeedKind seed = SeedKind::Hyperbolic);

/// One Gaussian-integration step of the slicing recursion. With D = a0 + a_{k-1}:
///   a_k = a0 - b0^2/D,  b_k = b0 b_{k-1}/D,
///   R_k = R0 + (R_{k-1} + S0) b0/D,  S_k = S_{k-1} + (R_{k-1} + S0) b_{k-1}/D,
///   Omega_k = (R_{k-1} + S0)^2 / (4 D).
SliceCoefficients recursion_step(const SliceCoefficients& prev, const SliceCoefficients& base);

/// Drives the recursion with extended-precision internal state. A double-rounded
/// quintuple cannot carry a0 - b0 = b0 (cosh(kappa eps) - 1) to better than about
/// eps_machine * a0 / (a0 - b0) relative, which for kappa*eps ~ 1e-5 caps plain
/// double iteration near 1e-9 against the closed forms; the widened state removes
/// that floor while emitting the same double-precision snapshots.
class RecursionSweep {
 public:
  /// Seeds from a double-rounded quintuple; multi-step accuracy is then capped
  /// by the seed's own rounding, as described above.
  explicit RecursionSweep(const SliceCoefficients& base);
  /// Builds the seed directly in extended precision; preferred for long sweeps.
  RecursionSweep(const DampedParams& p, double eps, double Lambda,
                 SeedKind seed = SeedKind::Hyperbolic);

  void advance();  ///< move from index k to k+1
  int k() const { return k_; }
  SliceCoefficients current() const;  ///< (a_k, b_k, R_k, S_k, Omega_k)
  double omega_accum() const;         ///< sum of Omega_1..Omega_k
  double log_product_accum() const;   ///< sum over steps of log(1/(2 eps D)) = log(b0/D)

 private:
  long double a0_, b0_, r0_, s0_;
  long double a_, b_, r_, s_, om_, om_sum_, log_prod_;
  int k_ = 0;
};

/// Hyperbolic closed forms, with y = kappa eps:
///   b_k = (1/2eps) sinh(y)/sinh((k+1)y),  a_k = b_k cosh((k+1)y).
/// Evaluated in scaled exponential form, safe for (k+1)y >> 700.
std::pair<double, double> closed_form_ab(int k, const DampedParams& p, double eps);

/// Source coefficients in closed form. The nested-sum expressions telescope to
///   R_k = S_k = (kappa^2 Lambda eps/2) coth(kappa eps/2) tanh((k+1) kappa eps/2),
/// evaluated here in O(1); R and S coincide at every index.
std::pair<double, double> closed_form_RS(int k, const DampedParams& p, double eps, double Lambda);

/// Sum of the completed-square remainders Omega_1..Omega_{N-1} (empty for N = 1).
double omega_sum(int N, const DampedParams& p, double eps, double Lambda,
                 SeedKind seed = SeedKind::Hyperbolic);

/// Continuum limit of omega_sum at fixed T = N eps:
///   kappa Lambda^2 (kappa T / 2 - tanh(kappa T / 2)).
/// The sum converges to this value at O(eps^2); it does not vanish for
/// Lambda != 0, so finite-N kernels carry the residual global phase
/// exp(-i * limit / hbar) relative to the closed-form kernel.
double omega_sum_limit(const DampedParams& p, double T, double Lambda);

/// Assembles the N-slice kernel
///   K_N = sqrt(1/(2 pi i hbar eps)) * prod_k sqrt(1/(2 eps D_k)) * exp(-i sum Omega / hbar)
///         * exp{(i/hbar)[a_{N-1}(x_b^2+x_a^2) - 2 b_{N-1} x_b x_a - R_{N-1} x_b - S_{N-1} x_a]}.
/// Exact for kappa = 0 at every N; requires N >= 2.
ComplexAmplitude discrete_kernel(const BoundarySpec& bc, const DampedParams& p, int N,
                                 SeedKind seed = SeedKind::Hyperbolic);

/// Worst-case deviations along a sweep of n steps, against the closed forms.
struct SweepDeviation {
  double max_ab = 0.0;        ///< max relative deviation of (a_k, b_k)
  double max_rs = 0.0;        ///< max relative deviation of (R_k, S_k)
  double max_identity = 0.0;  ///< max |a_k^2 - b_k^2 - (a0^2 - b0^2)| / a0^2
};
SweepDeviation sweep_deviation(int n, const DampedParams& p, double eps, double Lambda,
                               SeedKind seed = SeedKind::Hyperbolic);

}  // namespace qdamp
