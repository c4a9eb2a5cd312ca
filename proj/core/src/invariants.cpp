#include "qdamp/invariants.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "qdamp/classical.hpp"
#include "qdamp/comparators.hpp"
#include "qdamp/kernel.hpp"
#include "qdamp/report.hpp"
#include "qdamp/slicing.hpp"
#include "qdamp/wavepacket.hpp"

namespace qdamp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Fixed-seed draws: the suite is deterministic by construction.
std::vector<std::array<double, 3>> sample_ics() {
  std::mt19937 gen(12345);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), uv(-5.0, 5.0), uk(0.1, 2.0);
  std::vector<std::array<double, 3>> out;
  for (int i = 0; i < 32; ++i) out.push_back({ux(gen), uv(gen), uk(gen)});
  return out;
}

struct Rk4State {
  double x, v;
};

// Fourth-order integration of xdd = -kappa xd, independent of the closed form.
Rk4State rk4_damped(double x0, double v0, double kappa, double t_end, int steps) {
  const double h = t_end / steps;
  Rk4State s{x0, v0};
  for (int i = 0; i < steps; ++i) {
    const auto f = [kappa](Rk4State st) { return Rk4State{st.v, -kappa * st.v}; };
    const Rk4State k1 = f(s);
    const Rk4State k2 = f({s.x + 0.5 * h * k1.x, s.v + 0.5 * h * k1.v});
    const Rk4State k3 = f({s.x + 0.5 * h * k2.x, s.v + 0.5 * h * k2.v});
    const Rk4State k4 = f({s.x + h * k3.x, s.v + h * k3.v});
    s.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    s.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
  }
  return s;
}

}  // namespace

std::vector<InvariantResult> run_invariants(const FaultInjection& fault) {
  const bool known_fault = fault.target.empty() || fault.target == "slicing_identity" ||
                           fault.target == "kernel_roundtrip" || fault.target == "free_reduction";
  if (!known_fault) {
    throw std::invalid_argument("run_invariants: unknown fault target '" + fault.target + "'");
  }

  std::vector<InvariantResult> out;
  const auto push = [&](const char* module, const char* name, double measured, double bound,
                        bool pass) {
    out.push_back({module, name, pass, measured, bound});
  };
  const auto push_tol = [&](const char* module, const char* name, double measured, double bound) {
    push(module, name, measured, bound, measured <= bound);
  };

  const DampedParams std_p{0.6, 1.0};
  const double v0 = 5.0;
  const Complex theta0{0.5, 0.0};

  // classical_core
  {
    double worst = 0.0;
    for (const auto& [x0, vv, kap] : sample_ics()) {
      const DampedParams p{kap, 1.0};
      const InitialCondition ic{x0, vv};
      const CompanionParams c = companion_from_ic(ic, p);
      double res = 0.0;
      for (double t : {0.0, 0.3, 1.0, 2.5, 4.0}) {
        const double decay = std::exp(-kap * t);
        const double accel = kap * kap * c.eta * decay;
        res = std::max(res, companion_residual(c.Lambda + c.eta * decay, accel, c, p));
      }
      worst = std::max(worst, res / (1.0 + kap * kap * (std::abs(c.Lambda) + std::abs(c.eta))));
    }
    push_tol("classical_core", "phase_curve_coincidence", worst, 1e-12);
  }
  {
    const BoundarySpec bc{0.0, 1.0, 1.0};
    // Shoot the damped equation onto x_b with a secant iteration on v.
    const auto hit = [&](double v) {
      return rk4_damped(bc.x_a, v, std_p.kappa, bc.T, 4000).x - bc.x_b;
    };
    double v_lo = 0.1, v_hi = 5.0, f_lo = hit(v_lo), f_hi = hit(v_hi);
    for (int i = 0; i < 80; ++i) {
      const double v_mid = v_lo - f_lo * (v_hi - v_lo) / (f_hi - f_lo);
      const double f_mid = hit(v_mid);
      v_lo = v_hi;
      f_lo = f_hi;
      v_hi = v_mid;
      f_hi = f_mid;
      if (std::abs(f_mid) < 1e-14) break;
    }
    const CompanionParams from_ic = companion_from_ic({bc.x_a, v_hi}, std_p);
    const CompanionParams from_bc = companion_from_boundary(bc, std_p);
    const double dev = std::abs(from_ic.Lambda - from_bc.Lambda) / std::abs(from_bc.Lambda);
    push_tol("classical_core", "constructor_consistency", dev, 1e-9);
  }
  {
    double worst = 0.0;
    for (const auto& [x0, vv, kap] : sample_ics()) {
      const DampedParams p{kap, 1.0};
      const CompanionParams c = companion_from_ic({x0, vv}, p);
      for (double t : {0.0, 0.5, 1.5, 3.0}) {
        const PhasePoint pp = solve_damped({x0, vv}, p, t);
        const double energy =
            0.5 * pp.v * pp.v - 0.5 * kap * kap * (pp.x - c.Lambda) * (pp.x - c.Lambda);
        worst = std::max(worst, std::abs(energy) / (1.0 + vv * vv));
      }
    }
    push_tol("classical_core", "companion_energy_constant", worst, 1e-10);
  }
  {
    const CompanionParams c{2.0, -1.0};
    const double slope = conservative_force(c.Lambda + 1.0, c, std_p) -
                         conservative_force(c.Lambda, c, std_p);
    push("classical_core", "negative_stiffness", slope, 0.0, slope < 0.0);
  }

  // slicing_engine
  {
    SliceCoefficients base = short_time_coeffs(std_p, 1e-3, 1.0);
    const double c0 = base.a * base.a - base.b * base.b;
    if (fault.target == "slicing_identity") base.b *= 1.0 + 1e-6;
    SliceCoefficients it = base;
    double worst = 0.0;
    for (int k = 1; k <= 1000; ++k) {
      it = recursion_step(it, base);
      worst = std::max(worst, std::abs(it.a * it.a - it.b * it.b - c0) / (base.a * base.a));
    }
    push_tol("slicing_engine", "consistency_identity", worst, 1e-12);
  }
  {
    const SweepDeviation dev = sweep_deviation(10000, std_p, 1e-4, 1.0);
    push_tol("slicing_engine", "closed_form_recursion_agreement", dev.max_ab, 1e-10);
    push_tol("slicing_engine", "source_terms_closed_form_agreement", dev.max_rs, 1e-9);
  }
  {
    const int N = 100000;
    const double T = 1.0, Lambda = 1.0;
    RecursionSweep sweep(short_time_coeffs(std_p, T / N, Lambda));
    for (int k = 1; k < N; ++k) sweep.advance();
    const double target = std_p.kappa * Lambda * std::tanh(std_p.kappa * T / 2.0);
    const SliceCoefficients c = sweep.current();
    const double dev =
        std::max(std::abs(c.R - target), std::abs(c.S - target)) / std::abs(target);
    push_tol("slicing_engine", "source_term_limits", dev, 1e-4);
  }
  {
    const double eps = 1e-3;
    RecursionSweep sweep(short_time_coeffs(std_p, eps, 1.0));
    double min_gap = std::numeric_limits<double>::infinity();
    double prev_b = sweep.current().b;
    bool ordered = true;
    for (int k = 1; k <= 2000; ++k) {
      sweep.advance();
      const SliceCoefficients c = sweep.current();
      min_gap = std::min(min_gap, prev_b - c.b);
      ordered = ordered && c.a > c.b && c.b > 0.0;
      prev_b = c.b;
    }
    push("slicing_engine", "b_strictly_decreasing_a_above_b", min_gap, 0.0,
         min_gap > 0.0 && ordered);
  }
  {
    double worst = 0.0;
    const BoundarySpec bc{0.3, -0.7, 1.4};
    const DampedParams free_p{0.0, 1.0};
    for (int N : {2, 3, 16}) {
      const Complex kn = discrete_kernel(bc, free_p, N).value();
      const Complex kf = free_kernel(bc, 1.0).value();
      worst = std::max(worst, std::abs(kn - kf) / std::abs(kf));
    }
    push_tol("slicing_engine", "free_slicing_exact", worst, 1e-13);
  }
  {
    const BoundarySpec bc{0.0, 1.0, 1.0};
    const double limit = omega_sum_limit(std_p, bc.T, companion_from_boundary(bc, std_p).Lambda);
    const Complex adjust = std::exp(Complex(0.0, limit / std_p.hbar));
    const Complex kc = closed_kernel(bc, std_p).value();
    const Complex kn = discrete_kernel(bc, std_p, 2000).value();
    push_tol("slicing_engine", "kernel_converges_to_phase_adjusted_closed_form",
             std::abs(kn * adjust - kc) / std::abs(kc), 1e-6);
  }
  {
    const double T = 1.0, Lambda = 1.0;
    const double limit = omega_sum_limit(std_p, T, Lambda);
    const double dev8000 = std::abs(omega_sum(8000, std_p, T / 8000, Lambda) - limit);
    push_tol("slicing_engine", "remainder_sum_reaches_limit", dev8000, 1e-5);
    double logs[4], loge[4];
    int i = 0;
    for (int N : {500, 1000, 2000, 4000}) {
      logs[i] = std::log(std::abs(omega_sum(N, std_p, T / N, Lambda) - limit));
      loge[i] = std::log(T / N);
      ++i;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int j = 0; j < 4; ++j) {
      sx += loge[j];
      sy += logs[j];
      sxx += loge[j] * loge[j];
      sxy += loge[j] * logs[j];
    }
    const double order = (4.0 * sxy - sx * sy) / (4.0 * sxx - sx * sx);
    push_tol("slicing_engine", "remainder_sum_deviation_order_two", std::abs(order - 2.0), 0.4);
  }

  // kernel
  {
    const double kap = fault.target == "free_reduction" ? 1e-3 : 1e-8;
    const DampedParams p{kap, 1.0};
    double sup = 0.0;
    for (double T : {0.5, 1.0, 2.0}) {
      for (double xa = -2.0; xa <= 2.0; xa += 0.5) {
        for (double xb = -2.0; xb <= 2.0; xb += 0.5) {
          const BoundarySpec bc{xa, xb, T};
          const Complex kc = closed_kernel(bc, p).value();
          const Complex kf = free_kernel(bc, 1.0).value();
          sup = std::max(sup, std::abs(kc - kf) / std::abs(kf));
        }
      }
    }
    push_tol("kernel", "free_reduction", sup, 1e-6);
  }
  {
    double worst = 0.0;
    const double expected = std::sqrt(
        std_p.kappa / (2.0 * std::numbers::pi * std_p.hbar * std::sinh(std_p.kappa * 1.0)));
    for (double xa : {-1.5, 0.0, 2.0}) {
      for (double xb : {-0.5, 1.0, 1.7}) {
        const double mod = closed_kernel({xa, xb, 1.0}, std_p).modulus();
        worst = std::max(worst, std::abs(mod - expected) / expected);
      }
    }
    push_tol("kernel", "prefactor_modulus_endpoint_independent", worst, 1e-13);
  }
  {
    KernelQuadraticForm f = quadratic_form(1.0, std_p);
    if (fault.target == "kernel_roundtrip") f.c_ab += 1e-6;
    double worst = 0.0;
    std::mt19937 gen(777);
    std::uniform_real_distribution<double> ux(-2.0, 2.0);
    for (int i = 0; i < 64; ++i) {
      const double xa = ux(gen), xb = ux(gen);
      const Complex direct = closed_kernel({xa, xb, 1.0}, std_p).value();
      worst = std::max(worst, std::abs(f.evaluate(xa, xb) - direct) / std::abs(direct));
    }
    push_tol("kernel", "quadratic_form_roundtrip", worst, 1e-13);
  }
  {
    const double Lambda = 1.0;
    const KernelQuadraticForm f = quadratic_form_lambda(1.0, std_p, Lambda);
    const double expected = -std_p.kappa * Lambda * std::tanh(std_p.kappa * 0.5);
    push_tol("kernel", "linear_coeffs_carry_tanh_factor",
             std::max(std::abs(f.c_a - expected), std::abs(f.c_b - expected)), 1e-14);
    double min_mag = std::numeric_limits<double>::infinity();
    for (double T : {0.5, 1.0, 2.0}) {
      min_mag = std::min(min_mag, std::abs(quadratic_form_lambda(T, std_p, Lambda).c_a));
    }
    const double at_small_T = std::abs(quadratic_form_lambda(1e-9, std_p, Lambda).c_a);
    push("kernel", "linear_coeffs_vanish_only_with_tanh", at_small_T, 1e-9,
         min_mag > 1e-4 && at_small_T < 1e-9);
  }

  // wavepacket
  {
    const GaussianPacket pkt = make_packet(theta0, v0, std_p.hbar);
    const SamplingGrid grid = auto_grid(pkt, 1.0, std_p);
    const SampledWavefunction s = evolve_quadrature(pkt, 1.0, std_p, grid);
    const EvolvedPacket ev = evolve_analytic(pkt, 1.0, std_p);
    const QuadratureObservables obs = observables_from_samples(s, std_p.hbar);
    push_tol("wavepacket", "gaussian_closure_fit_residual", obs.fit_residual, 1e-6);
    push_tol("wavepacket", "analytic_quadrature_l2_agreement", l2_distance(s, ev), 1e-6);
    push("wavepacket", "norm_drift_reported", std::abs(ev.norm - 1.0), kNaN, true);
  }
  {
    const double T = 1e-6;
    const double slope = (mean_position(T, std_p, v0) - 0.0) / T;
    push_tol("wavepacket", "initial_slope_matches_v0", std::abs(slope - v0) / v0, 1e-5);
  }
  {
    const double t_star = velocity_zero_crossing(std_p);
    double prev = mean_velocity(0.0, std_p, v0);
    double min_drop = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 200; ++i) {
      const double cur = mean_velocity(t_star * i / 200.0, std_p, v0);
      min_drop = std::min(min_drop, prev - cur);
      prev = cur;
    }
    push("wavepacket", "velocity_strictly_decreasing", min_drop, 0.0, min_drop > 0.0);
    push_tol("wavepacket", "velocity_zero_at_crossing",
             std::abs(mean_velocity(t_star, std_p, v0)), 1e-8);
  }

  // comparators
  {
    double worst = 0.0;
    for (double T : {0.2, 0.8, 1.8, 5.0}) {
      const double ck = observables(MethodId::CK, T, std_p, v0, theta0).mean_x;
      const double dg = observables(MethodId::DGST, T, std_p, v0, theta0).mean_x;
      worst = std::max(worst, std::abs(ck - dg));
    }
    push_tol("comparators", "ck_dgst_positions_identical", worst, 1e-15);
  }
  {
    double worst = 0.0;
    const double T = 1e-6;
    for (MethodId m : {MethodId::LG, MethodId::KOCHAN, MethodId::CK, MethodId::DGST}) {
      const double slope = observables(m, T, std_p, v0, theta0).mean_x / T;
      worst = std::max(worst, std::abs(slope - v0) / v0);
    }
    push_tol("comparators", "shared_initial_slope", worst, 1e-5);
  }
  {
    int violations = 0;
    const double t_lg = reliability_interval(MethodId::LG, std_p).t_max;
    const double t_ko = reliability_interval(MethodId::KOCHAN, std_p).t_max;
    double prev_lg = v0, prev_ko = v0;
    for (int i = 1; i <= 100; ++i) {
      const double T_l = 1.1 * t_lg * i / 100.0;
      const double T_k = 1.1 * t_ko * i / 100.0;
      const double lg = observables(MethodId::LG, T_l, std_p, v0, theta0).mean_v;
      const double ko = observables(MethodId::KOCHAN, T_k, std_p, v0, theta0).mean_v;
      if (lg >= prev_lg) ++violations;
      if (ko >= prev_ko) ++violations;
      prev_lg = lg;
      prev_ko = ko;
    }
    if (!(prev_lg < 0.0 && prev_ko < 0.0)) ++violations;  // both cross inside 1.1x interval
    if (observables(MethodId::CK, 3.0, std_p, v0, theta0).mean_v != v0) ++violations;
    if (observables(MethodId::DGST, 3.0, std_p, v0, theta0).mean_v <=
        observables(MethodId::DGST, 2.0, std_p, v0, theta0).mean_v) {
      ++violations;
    }
    push("comparators", "velocity_curve_shapes", (double)violations, 0.0, violations == 0);
  }

  // cli_reporting
  {
    ResultTable t;
    t.meta.command = "compare";
    t.meta.version = "check";
    t.meta.schema_version = "1";
    t.meta.config_echo = {{"kappa", format_double(std_p.kappa)}, {"v0", format_double(v0)}};
    t.columns = {"T", "mean_x_LG", "mean_v_LG"};
    for (double T : {0.0, 0.5, 1.0, 1.5}) {
      t.rows.push_back({T, mean_position(T, std_p, v0), mean_velocity(T, std_p, v0)});
    }
    const bool same = to_csv(t) == to_csv(t) && to_json(t) == to_json(t);
    push("cli_reporting", "render_determinism", same ? 0.0 : 1.0, 0.0, same);
  }

  return out;
}

}  // namespace qdamp
