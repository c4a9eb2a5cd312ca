#pragma once

#include <complex>
#include <stdexcept>

namespace qdamp {

using Complex = std::complex<double>;

/// Physical knobs shared by every computation. Unit mass throughout.
struct DampedParams {
  double kappa = 0.6;  ///< friction coefficient, 1/time, >= 0 (0 selects the free-particle path)
  double hbar = 1.0;   ///< action scale, > 0
};

struct InitialCondition {
  double x0 = 0.0;
  double v0 = 0.0;
};

/// Endpoint data for a propagator evaluation: x(0) = x_a, x(T) = x_b.
struct BoundarySpec {
  double x_a = 0.0;
  double x_b = 0.0;
  double T = 1.0;  ///< duration, > 0 (T = 0 is a delta-kernel singularity)
};

/// Constants of the exact damped trajectory x(t) = Lambda + eta e^{-kappa t}.
/// Lambda is the asymptotic rest position and the equilibrium of the
/// conservative companion system.
struct CompanionParams {
  double Lambda = 0.0;
  double eta = 0.0;
};

struct PhasePoint {
  double x = 0.0;
  double v = 0.0;
};

/// Time-slicing grid: N slices of duration epsilon with N*epsilon = T.
struct SliceGrid {
  int N = 2;
  double epsilon = 0.0;
};

/// The quintuple carried through the Gaussian-integration recursion.
struct SliceCoefficients {
  double a = 0.0;
  double b = 0.0;
  double R = 0.0;
  double S = 0.0;
  double Omega = 0.0;
};

/// Seed choice for the recursion base coefficients; the hyperbolic seed makes
/// the closed forms exact at finite epsilon, the polynomial seed matches them
/// only to O(epsilon^2).
enum class SeedKind { Hyperbolic, Polynomial };

struct ComplexAmplitude {
  double re = 0.0;
  double im = 0.0;

  Complex value() const { return {re, im}; }
  double modulus() const { return std::abs(value()); }
  static ComplexAmplitude from(Complex z) { return {z.real(), z.imag()}; }
};

/// Kernel exponent decomposed over the endpoints:
/// K = prefactor * exp{(i/hbar)(c_bb x_b^2 + c_aa x_a^2 + c_ab x_a x_b + c_b x_b + c_a x_a)}.
struct KernelQuadraticForm {
  ComplexAmplitude prefactor;
  double c_aa = 0.0;
  double c_bb = 0.0;
  double c_ab = 0.0;
  double c_a = 0.0;
  double c_b = 0.0;
  double hbar = 1.0;

  Complex evaluate(double x_a, double x_b) const {
    const Complex i(0.0, 1.0);
    return prefactor.value() *
           std::exp(i / hbar *
                    (c_bb * x_b * x_b + c_aa * x_a * x_a + c_ab * x_a * x_b + c_b * x_b + c_a * x_a));
  }
};

/// Initial Gaussian packet psi0(q) = norm_factor * exp(-theta q^2 + i v0 q / hbar),
/// centered at q = 0 (nonzero centers are out of scope).
struct GaussianPacket {
  Complex theta = {0.5, 0.0};  ///< complex width coefficient, Re > 0
  double center = 0.0;
  double v0 = 5.0;  ///< carrier velocity
  Complex norm_factor = {0.0, 0.0};
};

/// Result of propagating a Gaussian packet:
/// psi_T(x) = amp * exp(-theta1 (x - mean_x)^2) * exp(i [phase_linear (x - mean_x) + phase_const]).
struct EvolvedPacket {
  Complex theta1 = {0.0, 0.0};
  double mean_x = 0.0;
  double phase_linear = 0.0;  ///< residual pure-phase slope; hbar*phase_linear is the mean momentum
  double phase_const = 0.0;
  double amp = 0.0;
  double norm = 0.0;  ///< integral of |psi_T|^2 (reported, not enforced)
};

struct InvariantFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a quadrature grid cannot resolve the integrand's phase
/// oscillation (estimated phase advance per node above pi/4).
struct UnderResolvedGrid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateRecursion : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qdamp
