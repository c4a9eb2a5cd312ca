#pragma once

#include "qdamp/types.hpp"

namespace qdamp {

/// Closed-form propagator of the damped particle,
///   K = sqrt(kappa/(2 pi i hbar sinh kappa T)) *
///       exp{(i/hbar)[kappa/(2 tanh kappa T)(x_b^2+x_a^2) - kappa x_b x_a/sinh(kappa T)
///                    - kappa Lambda(x_a,x_b) tanh(kappa T/2)(x_b+x_a)]},
/// with Lambda from companion_from_boundary. kappa = 0 dispatches to free_kernel.
/// Principal branch throughout: sqrt(1/i) = e^{-i pi/4}.
ComplexAmplitude closed_kernel(const BoundarySpec& bc, const DampedParams& p);

/// Free Schroedinger propagator sqrt(1/(2 pi i hbar T)) exp{i (x_b-x_a)^2/(2 hbar T)}.
ComplexAmplitude free_kernel(const BoundarySpec& bc, double hbar);

/// Exponent of closed_kernel expanded over the endpoints after substituting
/// Lambda(x_a, x_b). The substitution makes the exponent purely quadratic:
/// c_a = c_b = 0 identically, and it breaks the endpoint symmetry (c_aa != c_bb
/// for kappa > 0). Requires kappa > 0.
KernelQuadraticForm quadratic_form(double T, const DampedParams& p);

/// Same decomposition with Lambda kept as a free parameter. Here the linear
/// coefficients c_a = c_b = -kappa Lambda tanh(kappa T/2) vanish only when the
/// tanh factor does (T -> 0 or kappa -> 0).
KernelQuadraticForm quadratic_form_lambda(double T, const DampedParams& p, double Lambda);

/// Quadratic form of the free kernel: c_aa = c_bb = 1/(2T), c_ab = -1/T.
KernelQuadraticForm free_quadratic_form(double T, double hbar);

}  // namespace qdamp
