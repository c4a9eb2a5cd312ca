#pragma once

// Self-contained numerical oracles for the test suite. Everything here is
// deliberately independent of the library implementation: classic RK4, a
// hard-coded 10-point Gauss-Legendre rule, and a log-log order fit.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

struct State {
  double x;
  double v;
};

// RK4 on xdd = accel(x, v).
template <class Accel>
State rk4(double x0, double v0, double T, int steps, Accel&& accel) {
  double x = x0, v = v0;
  const double h = T / steps;
  for (int i = 0; i < steps; ++i) {
    const double k1x = v, k1v = accel(x, v);
    const double k2x = v + 0.5 * h * k1v, k2v = accel(x + 0.5 * h * k1x, v + 0.5 * h * k1v);
    const double k3x = v + 0.5 * h * k2v, k3v = accel(x + 0.5 * h * k2x, v + 0.5 * h * k2v);
    const double k4x = v + h * k3v, k4v = accel(x + h * k3x, v + h * k3v);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return {x, v};
}

inline State rk4_damped(double x0, double v0, double kappa, double T, int steps) {
  return rk4(x0, v0, T, steps, [kappa](double, double v) { return -kappa * v; });
}

inline State rk4_companion(double x0, double v0, double kappa, double Lambda, double T,
                           int steps) {
  return rk4(x0, v0, T, steps,
             [kappa, Lambda](double x, double) { return kappa * kappa * (x - Lambda); });
}

// Abscissas and weights of the 10-point Gauss-Legendre rule on [-1, 1].
inline const std::array<double, 5>& gl10_nodes() {
  static const std::array<double, 5> nodes = {0.14887433898163121, 0.43339539412924719,
                                              0.67940956829902441, 0.86506336668898451,
                                              0.97390652851717172};
  return nodes;
}

inline const std::array<double, 5>& gl10_weights() {
  static const std::array<double, 5> weights = {0.29552422471475287, 0.26926671930999636,
                                                0.21908636251598204, 0.14945134915058059,
                                                0.066671344308688138};
  return weights;
}

template <class F>
auto gl10_panels(F&& f, double a, double b, int panels) -> decltype(f(0.0)) {
  using R = decltype(f(0.0));
  R total{};
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    const double half = 0.5 * h;
    R acc{};
    for (int j = 0; j < 5; ++j) {
      const double dx = half * gl10_nodes()[j];
      acc += gl10_weights()[j] * (f(mid + dx) + f(mid - dx));
    }
    total += half * acc;
  }
  return total;
}

// Least-squares slope of log(dev) against log(eps).
inline double fit_order(const std::vector<double>& eps, const std::vector<double>& dev) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = (double)eps.size();
  for (size_t i = 0; i < eps.size(); ++i) {
    const double lx = std::log(eps[i]);
    const double ly = std::log(std::max(dev[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Neville extrapolation of f(d) to d = 0 from samples (d_i, f_i).
inline std::complex<double> extrapolate_to_zero(const std::vector<double>& d,
                                                std::vector<std::complex<double>> f) {
  const size_t n = d.size();
  for (size_t m = 1; m < n; ++m) {
    for (size_t i = 0; i + m < n; ++i) {
      f[i] = (d[i + m] * f[i] - d[i] * f[i + 1]) / (d[i + m] - d[i]);
    }
  }
  return f[0];
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
  return std::abs(got - want) / std::abs(want);
}

}  // namespace oracle
