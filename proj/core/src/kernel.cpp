#include "qdamp/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qdamp/classical.hpp"

namespace qdamp {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

Complex root_prefactor(double magnitude_sq_inverse_arg) {
  // sqrt(x/(2 pi i)) on the principal branch: sqrt(x/(2 pi)) e^{-i pi/4}.
  const double mod = std::sqrt(magnitude_sq_inverse_arg / (2.0 * std::numbers::pi));
  const double c = std::cos(std::numbers::pi / 4.0);
  return {mod * c, -mod * c};
}

}  // namespace

ComplexAmplitude closed_kernel(const BoundarySpec& bc, const DampedParams& p) {
  require(bc.T > 0.0, "closed_kernel: T must be > 0");
  require(p.kappa >= 0.0, "closed_kernel: kappa must be >= 0");
  if (p.kappa == 0.0) return free_kernel(bc, p.hbar);

  const double kT = p.kappa * bc.T;
  const double Lambda = companion_from_boundary(bc, p).Lambda;
  const Complex pref = root_prefactor(p.kappa / (p.hbar * std::sinh(kT)));
  const double expo = p.kappa / (2.0 * std::tanh(kT)) * (bc.x_b * bc.x_b + bc.x_a * bc.x_a) -
                      p.kappa * bc.x_b * bc.x_a / std::sinh(kT) -
                      p.kappa * Lambda * std::tanh(kT / 2.0) * (bc.x_b + bc.x_a);
  return ComplexAmplitude::from(pref * std::exp(Complex(0.0, expo / p.hbar)));
}

ComplexAmplitude free_kernel(const BoundarySpec& bc, double hbar) {
  require(bc.T > 0.0, "free_kernel: T must be > 0");
  require(hbar > 0.0, "free_kernel: hbar must be > 0");
  const Complex pref = root_prefactor(1.0 / (hbar * bc.T));
  const double dx = bc.x_b - bc.x_a;
  return ComplexAmplitude::from(pref * std::exp(Complex(0.0, dx * dx / (2.0 * hbar * bc.T))));
}

KernelQuadraticForm quadratic_form(double T, const DampedParams& p) {
  require(T > 0.0, "quadratic_form: T must be > 0");
  require(p.kappa > 0.0, "quadratic_form: kappa must be > 0");
  const double kT = p.kappa * T;
  const double half_coth = p.kappa / (2.0 * std::tanh(kT));
  const double c = p.kappa * std::tanh(kT / 2.0);
  const double u = 1.0 / std::expm1(-kT);  // Lambda(x_a, x_b) = (1+u) x_a - u x_b

  KernelQuadraticForm f;
  f.prefactor = ComplexAmplitude::from(root_prefactor(p.kappa / (p.hbar * std::sinh(kT))));
  f.c_bb = half_coth + c * u;
  f.c_aa = half_coth - c * (1.0 + u);
  f.c_ab = -p.kappa / std::sinh(kT) - c;
  f.c_a = 0.0;
  f.c_b = 0.0;
  f.hbar = p.hbar;
  return f;
}

KernelQuadraticForm quadratic_form_lambda(double T, const DampedParams& p, double Lambda) {
  require(T > 0.0, "quadratic_form_lambda: T must be > 0");
  require(p.kappa > 0.0, "quadratic_form_lambda: kappa must be > 0");
  const double kT = p.kappa * T;
  KernelQuadraticForm f;
  f.prefactor = ComplexAmplitude::from(root_prefactor(p.kappa / (p.hbar * std::sinh(kT))));
  f.c_bb = p.kappa / (2.0 * std::tanh(kT));
  f.c_aa = f.c_bb;
  f.c_ab = -p.kappa / std::sinh(kT);
  f.c_a = -p.kappa * Lambda * std::tanh(kT / 2.0);
  f.c_b = f.c_a;
  f.hbar = p.hbar;
  return f;
}

KernelQuadraticForm free_quadratic_form(double T, double hbar) {
  require(T > 0.0, "free_quadratic_form: T must be > 0");
  require(hbar > 0.0, "free_quadratic_form: hbar must be > 0");
  KernelQuadraticForm f;
  f.prefactor = ComplexAmplitude::from(root_prefactor(1.0 / (hbar * T)));
  f.c_bb = 1.0 / (2.0 * T);
  f.c_aa = f.c_bb;
  f.c_ab = -1.0 / T;
  f.c_a = 0.0;
  f.c_b = 0.0;
  f.hbar = hbar;
  return f;
}

}  // namespace qdamp
