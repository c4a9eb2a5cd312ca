#pragma once

#include <vector>

#include "qdamp/types.hpp"

namespace qdamp {

/// Normalized Gaussian packet exp(-theta q^2 + i v0 q/hbar) centered at q = 0.
GaussianPacket make_packet(Complex theta, double v0, double hbar);

/// Propagates the packet through the closed kernel by complex Gaussian
/// integration (completing the square against the kernel's quadratic form).
/// The result is again Gaussian; see EvolvedPacket for the reconstruction.
EvolvedPacket evolve_analytic(const GaussianPacket& pkt, double T, const DampedParams& p);

/// Sampling specification for the quadrature propagator.
struct SamplingGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  int n_x = 2001;             ///< output samples (odd, so Simpson weights apply)
  int panels = 0;             ///< 20-node Gauss-Legendre panels over the source window
  double window_sigmas = 8.0; ///< source window half-width in packet envelope sigmas
};

/// Grid sized from the packet envelope and the kernel's fastest phase
/// oscillation, with phase advance per quadrature node kept below pi/4.
SamplingGrid auto_grid(const GaussianPacket& pkt, double T, const DampedParams& p, int n_x = 2001);

struct SampledWavefunction {
  std::vector<double> x;
  std::vector<Complex> psi;
  std::vector<Complex> dpsi;  ///< d psi/dx, from differentiating the kernel under the integral
};

/// Direct quadrature of psi_T(x) = int K(x,T;q,0) psi0(q) dq over composite
/// 20-node Gauss-Legendre panels; the independent oracle for evolve_analytic.
/// Throws UnderResolvedGrid if the grid cannot resolve the integrand phase.
SampledWavefunction evolve_quadrature(const GaussianPacket& pkt, double T, const DampedParams& p,
                                      const SamplingGrid& grid);

/// Mean position v0 tanh(kappa T)/kappa (v0 T for kappa = 0).
double mean_position(double T, const DampedParams& p, double v0);

/// Mean velocity [2 kappa tanh(kappa T/2)/(e^{-kappa T}-1)] <x> + v0, which
/// equals v0 [1 - 2 tanh(kappa T)/(1 + e^{-kappa T})]; v0 for T = 0 or kappa = 0.
double mean_velocity(double T, const DampedParams& p, double v0);

/// The printed closed-form width
///   theta1 = [tanh^2(kappa T)/(hbar^2 kappa^2)] /
///            (4 [alpha0 - (i/hbar)(kappa/(2 tanh kappa T) - kappa tanh(kappa T/2)
///                                  - kappa tanh(kappa T/2)/(e^{-kappa T}-1))]).
/// It disagrees with the width obtained by evolve_analytic; the deviation is
/// reported side by side, never asserted away.
Complex theta1_formula(double T, const DampedParams& p, Complex alpha0);

/// Root of mean_velocity in T by bracketed bisection; equals ln(1+sqrt(2))/kappa.
double velocity_zero_crossing(const DampedParams& p);

/// Least-squares Gaussian fit of |psi|^2 (weighted log-quadratic in x).
struct GaussianFit {
  double mean = 0.0;
  double width_re = 0.0;   ///< recovered Re(theta1)
  double residual = 0.0;   ///< relative L2 residual of the density fit
};
GaussianFit fit_gaussian_density(const SampledWavefunction& s);

/// Observables integrated from quadrature samples: Simpson moments for the
/// mean and norm, mean velocity from hbar Im(conj(psi) dpsi)/|psi|^2, and the
/// full complex width from a density-weighted log-quadratic fit.
struct QuadratureObservables {
  double mean_x = 0.0;
  double mean_v = 0.0;
  double norm = 0.0;
  Complex theta1 = {0.0, 0.0};
  double fit_residual = 0.0;
};
QuadratureObservables observables_from_samples(const SampledWavefunction& s, double hbar);

/// Relative L2 distance between the samples and the analytic reconstruction.
double l2_distance(const SampledWavefunction& s, const EvolvedPacket& ev);

}  // namespace qdamp
