#include "qdamp/classical.hpp"

#include <cmath>
#include <stdexcept>

namespace qdamp {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

PhasePoint solve_damped(const InitialCondition& ic, const DampedParams& p, double t) {
  require(std::isfinite(t), "solve_damped: t must be finite");
  require(p.kappa >= 0.0, "solve_damped: kappa must be >= 0");
  if (p.kappa == 0.0) {
    return {ic.x0 + ic.v0 * t, ic.v0};
  }
  const CompanionParams c = companion_from_ic(ic, p);
  const double decay = std::exp(-p.kappa * t);
  return {c.Lambda + c.eta * decay, -p.kappa * c.eta * decay};
}

CompanionParams companion_from_ic(const InitialCondition& ic, const DampedParams& p) {
  require(p.kappa > 0.0, "companion_from_ic: kappa must be > 0");
  return {ic.x0 + ic.v0 / p.kappa, -ic.v0 / p.kappa};
}

CompanionParams companion_from_boundary(const BoundarySpec& bc, const DampedParams& p) {
  require(p.kappa > 0.0, "companion_from_boundary: kappa must be > 0");
  require(bc.T > 0.0, "companion_from_boundary: T must be > 0");
  // expm1 keeps e^{-kappa T} - 1 fully accurate down to kappa T ~ DBL_MIN.
  const double denom = std::expm1(-p.kappa * bc.T);
  const double eta = (bc.x_b - bc.x_a) / denom;
  return {bc.x_a - eta, eta};
}

double conservative_force(double x, const CompanionParams& c, const DampedParams& p) {
  return -p.kappa * p.kappa * (x - c.Lambda);
}

double lagrangian_density(const PhasePoint& pp, const CompanionParams& c, const DampedParams& p) {
  const double k2 = p.kappa * p.kappa;
  return 0.5 * pp.v * pp.v + 0.5 * k2 * pp.x * pp.x - k2 * c.Lambda * pp.x;
}

double companion_residual(double x, double accel, const CompanionParams& c,
                          const DampedParams& p) {
  return std::abs(accel - p.kappa * p.kappa * (x - c.Lambda));
}

double stationarity_residual(const InitialCondition& ic, const DampedParams& p,
                             const std::vector<double>& t_grid) {
  require(p.kappa > 0.0, "stationarity_residual: kappa must be > 0");
  const CompanionParams c = companion_from_ic(ic, p);
  double worst = 0.0;
  for (double t : t_grid) {
    const double decay = std::exp(-p.kappa * t);
    const double x = c.Lambda + c.eta * decay;
    const double accel = p.kappa * p.kappa * c.eta * decay;
    worst = std::max(worst, companion_residual(x, accel, c, p));
  }
  return worst;
}

}  // namespace qdamp
