#include "qdamp/slicing.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qdamp/classical.hpp"

namespace qdamp {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// x - tanh(x) loses all digits for small x; switch to the series.
double x_minus_tanh(double x) {
  const double ax = std::abs(x);
  if (ax < 0.1) {
    const double x2 = x * x;
    return x * x2 * (1.0 / 3.0 + x2 * (-2.0 / 15.0 + x2 * (17.0 / 315.0 - x2 * 62.0 / 2835.0)));
  }
  return x - std::tanh(x);
}

}  // namespace

SliceCoefficients short_time_coeffs(const DampedParams& p, double eps, double Lambda,
                                    SeedKind seed) {
  require(eps > 0.0, "short_time_coeffs: eps must be > 0");
  require(p.kappa >= 0.0, "short_time_coeffs: kappa must be >= 0");
  const double b0 = 1.0 / (2.0 * eps);
  const double ke = p.kappa * eps;
  const double a0 =
      seed == SeedKind::Hyperbolic ? b0 * std::cosh(ke) : b0 * (1.0 + 2.0 * (ke / 2.0) * (ke / 2.0));
  const double rs = p.kappa * p.kappa * Lambda * eps / 2.0;
  return {a0, b0, rs, rs, 0.0};
}

SliceCoefficients recursion_step(const SliceCoefficients& prev, const SliceCoefficients& base) {
  const double D = base.a + prev.a;
  if (!(D > 0.0) || !std::isfinite(D)) {
    throw DegenerateRecursion("recursion_step: a0 + a_{k-1} degenerate");
  }
  const double drive = prev.R + base.S;
  SliceCoefficients next;
  next.a = base.a - base.b * base.b / D;
  next.b = base.b * prev.b / D;
  next.R = base.R + drive * base.b / D;
  next.S = prev.S + drive * prev.b / D;
  next.Omega = drive * drive / (4.0 * D);

  const double c_next = next.a * next.a - next.b * next.b;
  const double c_base = base.a * base.a - base.b * base.b;
  if (std::abs(c_next - c_base) > 1e-12 * base.a * base.a) {
    throw InvariantFailure("recursion_step: a^2 - b^2 drifted from a0^2 - b0^2");
  }
  return next;
}

RecursionSweep::RecursionSweep(const SliceCoefficients& base)
    : a0_(base.a),
      b0_(base.b),
      r0_(base.R),
      s0_(base.S),
      a_(base.a),
      b_(base.b),
      r_(base.R),
      s_(base.S),
      om_(0.0L),
      om_sum_(0.0L),
      log_prod_(0.0L) {}

RecursionSweep::RecursionSweep(const DampedParams& p, double eps, double Lambda, SeedKind seed) {
  require(eps > 0.0, "RecursionSweep: eps must be > 0");
  require(p.kappa >= 0.0, "RecursionSweep: kappa must be >= 0");
  const long double e = eps;
  const long double ke = static_cast<long double>(p.kappa) * e;
  b0_ = 0.5L / e;
  a0_ = seed == SeedKind::Hyperbolic ? b0_ * std::cosh(ke)
                                     : b0_ * (1.0L + 2.0L * (ke / 2.0L) * (ke / 2.0L));
  r0_ = s0_ = static_cast<long double>(p.kappa) * p.kappa * Lambda * e / 2.0L;
  a_ = a0_;
  b_ = b0_;
  r_ = r0_;
  s_ = s0_;
  om_ = om_sum_ = log_prod_ = 0.0L;
}

void RecursionSweep::advance() {
  const long double D = a0_ + a_;
  if (!(D > 0.0L) || !std::isfinite(static_cast<double>(D))) {
    throw DegenerateRecursion("RecursionSweep: a0 + a_{k-1} degenerate");
  }
  const long double drive = r_ + s0_;
  om_ = drive * drive / (4.0L * D);
  om_sum_ += om_;
  log_prod_ += std::log(b0_ / D);
  const long double r_next = r0_ + drive * b0_ / D;
  const long double s_next = s_ + drive * b_ / D;
  a_ = a0_ - b0_ * b0_ / D;
  b_ = b0_ * b_ / D;
  r_ = r_next;
  s_ = s_next;
  ++k_;
}

SliceCoefficients RecursionSweep::current() const {
  return {static_cast<double>(a_), static_cast<double>(b_), static_cast<double>(r_),
          static_cast<double>(s_), static_cast<double>(om_)};
}

double RecursionSweep::omega_accum() const { return static_cast<double>(om_sum_); }

double RecursionSweep::log_product_accum() const { return static_cast<double>(log_prod_); }

std::pair<double, double> closed_form_ab(int k, const DampedParams& p, double eps) {
  require(k >= 0, "closed_form_ab: k must be >= 0");
  require(eps > 0.0, "closed_form_ab: eps must be > 0");
  const double b0 = 1.0 / (2.0 * eps);
  const double y = p.kappa * eps;
  if (y == 0.0) {
    const double v = b0 / (k + 1.0);
    return {v, v};
  }
  // sinh(y)/sinh((k+1)y) = e^{-ky}(1-e^{-2y})/(1-e^{-2(k+1)y}), overflow-free.
  const double num = -std::expm1(-2.0 * y);
  const double den = -std::expm1(-2.0 * (k + 1.0) * y);
  const double b = b0 * std::exp(-k * y) * num / den;
  const double a = b0 * std::sinh(y) * (1.0 + std::exp(-2.0 * (k + 1.0) * y)) / den;
  return {a, b};
}

std::pair<double, double> closed_form_RS(int k, const DampedParams& p, double eps, double Lambda) {
  require(k >= 0, "closed_form_RS: k must be >= 0");
  require(eps > 0.0, "closed_form_RS: eps must be > 0");
  if (p.kappa == 0.0 || Lambda == 0.0) return {0.0, 0.0};
  // The nested sums telescope; x/tanh(x) is stable down to x = 0.
  const double x = p.kappa * eps / 2.0;
  const double v = p.kappa * Lambda * (x / std::tanh(x)) * std::tanh((k + 1.0) * x);
  return {v, v};
}

double omega_sum(int N, const DampedParams& p, double eps, double Lambda, SeedKind seed) {
  require(N >= 1, "omega_sum: N must be >= 1");
  RecursionSweep sweep(p, eps, Lambda, seed);
  for (int k = 1; k < N; ++k) sweep.advance();
  return sweep.omega_accum();
}

double omega_sum_limit(const DampedParams& p, double T, double Lambda) {
  if (p.kappa == 0.0 || Lambda == 0.0) return 0.0;
  return p.kappa * Lambda * Lambda * x_minus_tanh(p.kappa * T / 2.0);
}

ComplexAmplitude discrete_kernel(const BoundarySpec& bc, const DampedParams& p, int N,
                                 SeedKind seed) {
  require(N >= 2, "discrete_kernel: N must be >= 2");
  require(bc.T > 0.0, "discrete_kernel: T must be > 0");
  const double eps = bc.T / N;
  const double Lambda = p.kappa > 0.0 ? companion_from_boundary(bc, p).Lambda : 0.0;

  RecursionSweep sweep(p, eps, Lambda, seed);
  for (int k = 1; k < N; ++k) sweep.advance();
  const SliceCoefficients c = sweep.current();

  const double log_amp =
      -0.5 * std::log(2.0 * std::numbers::pi * p.hbar * eps) + 0.5 * sweep.log_product_accum();
  const double phi = c.a * (bc.x_b * bc.x_b + bc.x_a * bc.x_a) - 2.0 * c.b * bc.x_b * bc.x_a -
                     c.R * bc.x_b - c.S * bc.x_a;
  const double phase = -std::numbers::pi / 4.0 + (phi - sweep.omega_accum()) / p.hbar;
  const double amp = std::exp(log_amp);
  return {amp * std::cos(phase), amp * std::sin(phase)};
}

SweepDeviation sweep_deviation(int n, const DampedParams& p, double eps, double Lambda,
                               SeedKind seed) {
  require(n >= 1, "sweep_deviation: n must be >= 1");
  const SliceCoefficients base = short_time_coeffs(p, eps, Lambda, seed);
  const double c0 = base.a * base.a - base.b * base.b;
  const double a0_sq = base.a * base.a;
  RecursionSweep sweep(p, eps, Lambda, seed);
  SweepDeviation dev;
  for (int k = 1; k <= n; ++k) {
    sweep.advance();
    const SliceCoefficients it = sweep.current();
    const auto [ac, bc] = closed_form_ab(k, p, eps);
    dev.max_ab = std::max({dev.max_ab, std::abs(it.a - ac) / std::abs(ac),
                           std::abs(it.b - bc) / std::abs(bc)});
    const auto [rc, sc] = closed_form_RS(k, p, eps, Lambda);
    if (rc != 0.0) {
      dev.max_rs = std::max({dev.max_rs, std::abs(it.R - rc) / std::abs(rc),
                             std::abs(it.S - sc) / std::abs(sc)});
    }
    const double ident = std::abs(it.a * it.a - it.b * it.b - c0) / a0_sq;
    dev.max_identity = std::max(dev.max_identity, ident);
  }
  return dev;
}

}  // namespace qdamp
