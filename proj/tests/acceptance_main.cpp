// Acceptance gate: ten numbered criteria, one PASS/FAIL line each.
// Run with no arguments for all criteria, or pass criterion numbers to
// select a subset (used by the ctest registration). Exit 0 iff every
// selected criterion passes.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qdamp/classical.hpp"
#include "qdamp/comparators.hpp"
#include "qdamp/kernel.hpp"
#include "qdamp/slicing.hpp"
#include "qdamp/types.hpp"
#include "qdamp/wavepacket.hpp"

namespace {

using qdamp::BoundarySpec;
using qdamp::Complex;
using qdamp::DampedParams;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Least-squares slope of log|y| against log(eps); the convergence order.
double fit_order(const std::vector<double>& eps, const std::vector<double>& y) {
  const size_t n = eps.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double lx = std::log(eps[i]);
    const double ly = std::log(std::max(std::abs(y[i]), 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

bool criterion_01() {
  const DampedParams p{0.6, 1.0};
  const double eps = 1e-4;
  const auto t0 = std::chrono::steady_clock::now();
  const auto dev = qdamp::sweep_deviation(10000, p, eps, 1.0, qdamp::SeedKind::Hyperbolic);
  const double dt = seconds_since(t0);
  const bool ok = dev.max_ab < 1e-10 && dt < 1.0;
  std::printf("[criterion 01] %s closed-form vs recursion (a_k, b_k): max relative deviation "
              "%.4e (bound 1e-10) over k <= 1e4 at kappa=0.6 eps=1e-4, runtime %.3f s (bound 1 s)\n",
              ok ? "PASS" : "FAIL", dev.max_ab, dt);
  return ok;
}

bool criterion_02() {
  const DampedParams p{0.6, 1.0};
  const auto dev = qdamp::sweep_deviation(10000, p, 1e-4, 1.0, qdamp::SeedKind::Hyperbolic);
  const bool ok = dev.max_identity < 1e-12;
  std::printf("[criterion 02] %s consistency identity: max |a_k^2 - b_k^2 - (a0^2 - b0^2)|/a0^2 "
              "= %.4e (bound 1e-12) over k <= 1e4\n",
              ok ? "PASS" : "FAIL", dev.max_identity);
  return ok;
}

bool criterion_03() {
  const DampedParams p{0.6, 1.0};
  const double T = 1.0, Lambda = 1.0;

  const int N = 100000;
  qdamp::RecursionSweep sw(p, T / N, Lambda, qdamp::SeedKind::Hyperbolic);
  for (int k = 0; k < N; ++k) sw.advance();
  const auto c = sw.current();
  const double limit = p.kappa * Lambda * std::expm1(p.kappa * T) / (std::exp(p.kappa * T) + 1.0);
  const double dev_r = std::abs(c.R - limit) / limit;
  const double dev_s = std::abs(c.S - limit) / limit;
  const bool rs_ok = dev_r < 1e-4 && dev_s < 1e-4;

  std::vector<double> eps, raw, shifted;
  const double om_limit = qdamp::omega_sum_limit(p, T, Lambda);
  for (int n : {250, 500, 1000, 2000}) {
    const double e = T / n;
    const double s = qdamp::omega_sum(n, p, e, Lambda, qdamp::SeedKind::Hyperbolic);
    eps.push_back(e);
    raw.push_back(s);
    shifted.push_back(s - om_limit);
  }
  const double order_raw = fit_order(eps, raw);
  const double order_shifted = fit_order(eps, shifted);
  const bool omega_ok = std::abs(order_raw - 2.0) <= 0.2;

  const bool ok = rs_ok && omega_ok;
  std::printf("[criterion 03] %s source-term limits: R_N, S_N relative deviation from "
              "kappa*Lambda*(e^{kT}-1)/(e^{kT}+1) = %.4e, %.4e (bound 1e-4) at N=1e5; "
              "sum(Omega) fitted order %.4f (required 2.0 +/- 0.2)\n",
              ok ? "PASS" : "FAIL", dev_r, dev_s, order_raw);
  std::printf("               sum(Omega) converges at order %.4f to the nonzero constant %.12e "
              "= kappa*Lambda^2*(kappa*T/2 - tanh(kappa*T/2)), not to zero; the raw sum's "
              "fitted order is therefore ~0 by construction\n",
              order_shifted, om_limit);
  return ok;
}

bool criterion_04() {
  const DampedParams p{0.6, 1.0};
  const BoundarySpec bc{0.0, 1.0, 1.0};
  const Complex k_closed = qdamp::closed_kernel(bc, p).value();
  const double om_limit =
      qdamp::omega_sum_limit(p, bc.T, qdamp::companion_from_boundary(bc, p).Lambda);
  const Complex k_adjusted = k_closed * std::exp(Complex(0.0, -om_limit / p.hbar));

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> eps, dev_closed, dev_adjusted;
  double dev_final = 0.0, dev_final_adj = 0.0;
  for (int n : {1250, 2500, 5000, 10000}) {
    const Complex kn = qdamp::discrete_kernel(bc, p, n, qdamp::SeedKind::Hyperbolic).value();
    eps.push_back(bc.T / n);
    dev_closed.push_back(std::abs(kn - k_closed) / std::abs(k_closed));
    dev_adjusted.push_back(std::abs(kn - k_adjusted) / std::abs(k_closed));
    if (n == 10000) {
      dev_final = dev_closed.back();
      dev_final_adj = dev_adjusted.back();
    }
  }
  const double dt = seconds_since(t0);
  const double order = fit_order(eps, dev_closed);
  const double order_adj = fit_order(eps, dev_adjusted);
  const bool ok = dev_final < 1e-3 && order >= 1.0 && dt < 5.0;
  std::printf("[criterion 04] %s kernel convergence at (x_a,x_b,T,kappa,hbar)=(0,1,1,0.6,1): "
              "|K_N - K_closed|/|K_closed| = %.4e at N=1e4 (bound 1e-3), fitted order %.4f "
              "(required >= 1), runtime %.3f s (bound 5 s)\n",
              ok ? "PASS" : "FAIL", dev_final, order, dt);
  std::printf("               the deviation saturates at 2|sin(omega_limit/(2 hbar))| = %.6e "
              "because K_N -> K_closed * exp(-i*%.12e); against that phase-adjusted target the "
              "deviation is %.4e at N=1e4 with fitted order %.4f\n",
              2.0 * std::abs(std::sin(0.5 * om_limit / p.hbar)), om_limit, dev_final_adj,
              order_adj);
  return ok;
}

bool criterion_05() {
  const DampedParams p{1e-8, 1.0};
  double sup = 0.0;
  for (double T : {0.5, 1.0, 2.0}) {
    for (int i = 0; i <= 40; ++i) {
      for (int j = 0; j <= 40; ++j) {
        const BoundarySpec bc{-2.0 + 0.1 * i, -2.0 + 0.1 * j, T};
        const Complex damped = qdamp::closed_kernel(bc, p).value();
        const Complex free = qdamp::free_kernel(bc, p.hbar).value();
        sup = std::max(sup, std::abs(damped - free) / std::abs(free));
      }
    }
  }
  const bool ok = sup < 1e-6;
  std::printf("[criterion 05] %s free-particle reduction: sup relative deviation of the closed "
              "kernel at kappa=1e-8 from the free kernel over [-2,2]^2, T in {0.5,1,2} = %.4e "
              "(bound 1e-6)\n",
              ok ? "PASS" : "FAIL", sup);
  return ok;
}

bool criterion_06() {
  const DampedParams p{0.6, 1.0};
  const double v0 = 5.0;
  const double mx = qdamp::mean_position(1.0, p, v0);
  const double mv = qdamp::mean_velocity(1.0, p, v0);
  const bool printed_ok = std::abs(mx - 4.475413) < 5e-7 && std::abs(mv - 1.53251) < 5e-6;

  const auto pkt = qdamp::make_packet({0.5, 0.0}, v0, p.hbar);
  const auto samples = qdamp::evolve_quadrature(pkt, 1.0, p, qdamp::auto_grid(pkt, 1.0, p));
  const auto q = qdamp::observables_from_samples(samples, p.hbar);
  const bool quad_ok = std::abs(q.mean_x - mx) < 1e-6 && std::abs(q.mean_v - mv) < 1e-6;

  double worst_asym = 0.0;
  for (auto m : {qdamp::MethodId::LG, qdamp::MethodId::CK, qdamp::MethodId::DGST,
                 qdamp::MethodId::KOCHAN}) {
    const double target = m == qdamp::MethodId::KOCHAN ? 16.6667 : 8.33333;
    const double got = qdamp::observables(m, 40.0, p, v0, {0.5, 0.0}).mean_x;
    worst_asym = std::max(worst_asym, std::abs(got - target));
  }
  const bool asym_ok = worst_asym < 1e-4;

  const bool ok = printed_ok && quad_ok && asym_ok;
  std::printf("[criterion 06] %s figure regime (v0=5, kappa=0.6): <x>(1) = %.7f (target 4.475413), "
              "<v>(1) = %.6f (target 1.53251); quadrature confirms to (%.2e, %.2e) (bound 1e-6); "
              "<x>(40) worst deviation from {8.33333 (LG,CK,DGST), 16.6667 (KOCHAN)} = %.2e "
              "(bound 1e-4)\n",
              ok ? "PASS" : "FAIL", mx, mv, std::abs(q.mean_x - mx), std::abs(q.mean_v - mv),
              worst_asym);
  return ok;
}

bool criterion_07() {
  const DampedParams p{0.6, 1.0};
  const double got = qdamp::velocity_zero_crossing(p);
  const double exact = std::log(1.0 + std::sqrt(2.0)) / 0.6;
  const double dev = std::abs(got - exact);
  const bool ok = dev <= 1e-8;
  std::printf("[criterion 07] %s velocity zero crossing at kappa=0.6: %.10f vs ln(1+sqrt(2))/0.6 "
              "= %.10f (prints as 1.4689560), |diff| = %.2e (bound 1e-8)\n",
              ok ? "PASS" : "FAIL", got, exact, dev);
  return ok;
}

bool criterion_08() {
  const DampedParams p{0.6, 1.0};
  const auto pkt = qdamp::make_packet({0.5, 0.0}, 5.0, p.hbar);
  bool ok = true;
  double worst = 0.0;
  for (double T : {0.5, 1.0, 1.469}) {
    const auto samples = qdamp::evolve_quadrature(pkt, T, p, qdamp::auto_grid(pkt, T, p));
    const double res = qdamp::fit_gaussian_density(samples).residual;
    worst = std::max(worst, res);
    ok = ok && res < 1e-6;
  }
  std::printf("[criterion 08] %s Gaussian closure: worst relative L2 Gaussian-fit residual of the "
              "quadrature-propagated packet over T in {0.5, 1, 1.469} = %.4e (bound 1e-6)\n",
              ok ? "PASS" : "FAIL", worst);
  return ok;
}

bool criterion_09() {
  const DampedParams p{0.6, 1.0};
  const Complex alpha0{0.5, 0.0};
  const auto pkt = qdamp::make_packet(alpha0, 5.0, p.hbar);
  bool ok = true;
  double worst = 0.0;
  struct Row {
    double T;
    Complex analytic, formula;
  };
  std::vector<Row> rows;
  for (double T : {0.5, 1.0, 1.469}) {
    const auto ev = qdamp::evolve_analytic(pkt, T, p);
    const auto samples = qdamp::evolve_quadrature(pkt, T, p, qdamp::auto_grid(pkt, T, p));
    const double l2 = qdamp::l2_distance(samples, ev);
    worst = std::max(worst, l2);
    ok = ok && l2 < 1e-6;
    rows.push_back({T, ev.theta1, qdamp::theta1_formula(T, p, alpha0)});
  }
  std::printf("[criterion 09] %s oracle agreement: worst relative L2 distance between analytic "
              "and quadrature propagation over T in {0.5, 1, 1.469} = %.4e (bound 1e-6)\n",
              ok ? "PASS" : "FAIL", worst);
  std::printf("               width discrepancy table (reported, not asserted):\n");
  std::printf("               %8s  %23s  %23s  %12s\n", "T", "theta1 (analytic)",
              "theta1 (printed formula)", "|difference|");
  for (const auto& r : rows) {
    std::printf("               %8.3f  %11.8f%+.8fi  %11.8f%+.8fi  %12.6e\n", r.T,
                r.analytic.real(), r.analytic.imag(), r.formula.real(), r.formula.imag(),
                std::abs(r.analytic - r.formula));
  }
  return ok;
}

bool criterion_10() {
  const char* cli = std::getenv("QDAMP_CLI");
  if (cli == nullptr) {
    std::printf("[criterion 10] FAIL determinism: QDAMP_CLI is not set, cannot locate the "
                "command-line binary\n");
    return false;
  }
  const auto dir = std::filesystem::temp_directory_path() / "qdamp_acceptance_10";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto run_once = [&](const std::string& name) {
    const std::string cmd = std::string("\"") + cli + "\" compare --out \"" +
                            (dir / name).string() + "\" >/dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  const int rc1 = run_once("a.csv");
  const int rc2 = run_once("b.csv");
  auto slurp = [&](const std::string& name) {
    std::ifstream in(dir / name, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };
  const std::string a = slurp("a.csv");
  const std::string b = slurp("b.csv");
  std::filesystem::remove_all(dir);
  const bool ok = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
  std::printf("[criterion 10] %s determinism: two `compare` runs with the figure configuration "
              "produced %zu-byte CSV outputs that %s\n",
              ok ? "PASS" : "FAIL", a.size(), a == b ? "are byte-identical" : "DIFFER");
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  using Criterion = bool (*)();
  const Criterion all[10] = {criterion_01, criterion_02, criterion_03, criterion_04,
                             criterion_05, criterion_06, criterion_07, criterion_08,
                             criterion_09, criterion_10};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (n < 1 || n > 10) {
      std::fprintf(stderr, "usage: %s [criterion numbers 1..10]\n", argv[0]);
      return 1;
    }
    selected.push_back(n);
  }
  if (selected.empty()) {
    for (int n = 1; n <= 10; ++n) selected.push_back(n);
  }
  int failures = 0;
  for (int n : selected) {
    if (!all[n - 1]()) ++failures;
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria FAILED\n", failures, selected.size());
  }
  return failures == 0 ? 0 : 1;
}
