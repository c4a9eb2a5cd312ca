#pragma once

#include <vector>

#include "qdamp/types.hpp"

namespace qdamp {

/// Exact solution of xdd + kappa xd = 0 at time t; kappa = 0 gives uniform motion.
PhasePoint solve_damped(const InitialCondition& ic, const DampedParams& p, double t);

/// Companion constants from an initial condition: Lambda = x0 + v0/kappa, eta = -v0/kappa.
/// Rejects kappa = 0 (the companion system is undefined there).
CompanionParams companion_from_ic(const InitialCondition& ic, const DampedParams& p);

/// Companion constants from endpoint data:
/// Lambda = x_a - (x_b - x_a)/(e^{-kappa T} - 1), eta = (x_b - x_a)/(e^{-kappa T} - 1).
CompanionParams companion_from_boundary(const BoundarySpec& bc, const DampedParams& p);

/// Force term of the conservative companion system in the convention
/// xdd + F = 0, so F = -kappa^2 (x - Lambda) and the acceleration is
/// +kappa^2 (x - Lambda). The stiffness coefficient dF/dx = -kappa^2 is
/// negative for every kappa > 0 (inverted oscillator).
double conservative_force(double x, const CompanionParams& c, const DampedParams& p);

/// Companion Lagrangian density: L = v^2/2 + kappa^2 x^2/2 - kappa^2 Lambda x.
double lagrangian_density(const PhasePoint& pp, const CompanionParams& c, const DampedParams& p);

/// Pointwise defect of the companion equation of motion, |accel - kappa^2 (x - Lambda)|.
double companion_residual(double x, double accel, const CompanionParams& c, const DampedParams& p);

/// Max of |xdd(t) - kappa^2 (x(t) - Lambda)| along the exact damped trajectory,
/// evaluated with analytic second derivatives over the given times.
double stationarity_residual(const InitialCondition& ic, const DampedParams& p,
                             const std::vector<double>& t_grid);

}  // namespace qdamp
