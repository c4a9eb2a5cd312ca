#include "qdamp/wavepacket.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qdamp/kernel.hpp"

namespace qdamp {

namespace {

constexpr Complex kI{0.0, 1.0};

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

KernelQuadraticForm kernel_coeffs(double T, const DampedParams& p) {
  return p.kappa > 0.0 ? quadratic_form(T, p) : free_quadratic_form(T, p.hbar);
}

// 20-point Gauss-Legendre rule on [-1, 1], nodes by Newton iteration.
struct GaussRule {
  std::array<double, 20> x{};
  std::array<double, 20> w{};
};

const GaussRule& gauss20() {
  static const GaussRule rule = [] {
    GaussRule r;
    constexpr int n = 20;
    for (int i = 0; i < n; ++i) {
      double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = t;
        for (int j = 2; j <= n; ++j) {
          const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (t * p1 - p0) / (t * t - 1.0);
        const double step = p1 / dp;
        t -= step;
        if (std::abs(step) < 1e-15) break;
      }
      r.x[i] = t;
      r.w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    return r;
  }();
  return rule;
}

struct LogQuadraticFit {
  Complex c0, c1, c2;
  double xc = 0.0;
  double density_residual = 0.0;
};

// Density-weighted least squares of log(psi) against c0 + c1 xi + c2 xi^2,
// xi centered on the density mean; the phase is unwrapped outward from the
// density peak.
LogQuadraticFit fit_log_quadratic(const SampledWavefunction& s) {
  const size_t n = s.x.size();
  require(n >= 5 && s.psi.size() == n, "fit_log_quadratic: need >= 5 samples");

  std::vector<double> dens(n);
  double wsum = 0.0, xmean = 0.0;
  size_t peak = 0;
  for (size_t i = 0; i < n; ++i) {
    dens[i] = std::norm(s.psi[i]);
    wsum += dens[i];
    xmean += dens[i] * s.x[i];
    if (dens[i] > dens[peak]) peak = i;
  }
  require(wsum > 0.0, "fit_log_quadratic: all samples vanish");
  const double xc = xmean / wsum;

  std::vector<double> phase(n, 0.0);
  phase[peak] = std::arg(s.psi[peak]);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (size_t i = peak + 1; i < n; ++i) {
    double ph = std::arg(s.psi[i]);
    while (ph - phase[i - 1] > std::numbers::pi) ph -= two_pi;
    while (ph - phase[i - 1] < -std::numbers::pi) ph += two_pi;
    phase[i] = ph;
  }
  for (size_t i = peak; i-- > 0;) {
    double ph = std::arg(s.psi[i]);
    while (ph - phase[i + 1] > std::numbers::pi) ph -= two_pi;
    while (ph - phase[i + 1] < -std::numbers::pi) ph += two_pi;
    phase[i] = ph;
  }

  long double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  long double rr[3] = {0, 0, 0};
  long double ri[3] = {0, 0, 0};
  for (size_t i = 0; i < n; ++i) {
    if (dens[i] <= 0.0) continue;
    const long double xi = s.x[i] - xc;
    const long double w = dens[i];
    const long double lre = 0.5L * std::log((long double)dens[i]);
    const long double lim = phase[i];
    long double pw[5] = {1.0L, xi, xi * xi, xi * xi * xi, xi * xi * xi * xi};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) m[a][b] += w * pw[a + b];
      rr[a] += w * pw[a] * lre;
      ri[a] += w * pw[a] * lim;
    }
  }
  // Gaussian elimination with partial pivoting on the 3x3 normal system.
  long double aug[3][5];
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) aug[a][b] = m[a][b];
    aug[a][3] = rr[a];
    aug[a][4] = ri[a];
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int row = col + 1; row < 3; ++row)
      if (std::abs((double)aug[row][col]) > std::abs((double)aug[piv][col])) piv = row;
    std::swap(aug[piv], aug[col]);
    require(aug[col][col] != 0.0L, "fit_log_quadratic: singular normal equations");
    for (int row = col + 1; row < 3; ++row) {
      const long double f = aug[row][col] / aug[col][col];
      for (int b = col; b < 5; ++b) aug[row][b] -= f * aug[col][b];
    }
  }
  long double sol[3][2];
  for (int row = 2; row >= 0; --row) {
    for (int rhs = 0; rhs < 2; ++rhs) {
      long double acc = aug[row][3 + rhs];
      for (int b = row + 1; b < 3; ++b) acc -= aug[row][b] * sol[b][rhs];
      sol[row][rhs] = acc / aug[row][row];
    }
  }

  LogQuadraticFit fit;
  fit.xc = xc;
  fit.c0 = {(double)sol[0][0], (double)sol[0][1]};
  fit.c1 = {(double)sol[1][0], (double)sol[1][1]};
  fit.c2 = {(double)sol[2][0], (double)sol[2][1]};

  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double xi = s.x[i] - xc;
    const double fitted =
        std::exp(2.0 * (fit.c0.real() + fit.c1.real() * xi + fit.c2.real() * xi * xi));
    num += (fitted - dens[i]) * (fitted - dens[i]);
    den += dens[i] * dens[i];
  }
  fit.density_residual = std::sqrt(num / den);
  return fit;
}

}  // namespace

GaussianPacket make_packet(Complex theta, double v0, double hbar) {
  require(theta.real() > 0.0, "make_packet: Re(theta) must be > 0");
  require(hbar > 0.0, "make_packet: hbar must be > 0");
  GaussianPacket pkt;
  pkt.theta = theta;
  pkt.center = 0.0;
  pkt.v0 = v0;
  pkt.norm_factor = std::pow(2.0 * theta.real() / std::numbers::pi, 0.25);
  return pkt;
}

EvolvedPacket evolve_analytic(const GaussianPacket& pkt, double T, const DampedParams& p) {
  require(T > 0.0, "evolve_analytic: T must be > 0");
  require(pkt.theta.real() > 0.0, "evolve_analytic: Re(theta) must be > 0");
  require(pkt.center == 0.0, "evolve_analytic: nonzero packet center is out of scope");
  const KernelQuadraticForm f = kernel_coeffs(T, p);
  const double h = p.hbar;

  const Complex A = pkt.theta - kI * f.c_aa / h;
  if (!(A.real() > 0.0)) {
    throw InvariantFailure("evolve_analytic: non-convergent Gaussian integral (Re A <= 0)");
  }
  const Complex theta1 = f.c_ab * f.c_ab / (4.0 * h * h * A) - kI * f.c_bb / h;
  const Complex beta = -pkt.v0 * f.c_ab / (2.0 * h * h * A);
  const double mean = beta.real() / (2.0 * theta1.real());
  const Complex g = beta - 2.0 * theta1 * mean;
  const Complex c0 = beta * mean - theta1 * mean * mean;
  const Complex C = f.prefactor.value() * pkt.norm_factor *
                    std::sqrt(std::numbers::pi / A) *
                    std::exp(-pkt.v0 * pkt.v0 / (4.0 * h * h * A)) * std::exp(c0);

  EvolvedPacket ev;
  ev.theta1 = theta1;
  ev.mean_x = mean;
  ev.phase_linear = g.imag();
  ev.phase_const = std::arg(C);
  ev.amp = std::abs(C);
  ev.norm = ev.amp * ev.amp * std::sqrt(std::numbers::pi / (2.0 * theta1.real()));
  return ev;
}

SamplingGrid auto_grid(const GaussianPacket& pkt, double T, const DampedParams& p, int n_x) {
  require(n_x >= 5, "auto_grid: n_x must be >= 5");
  const KernelQuadraticForm f = kernel_coeffs(T, p);
  const EvolvedPacket ev = evolve_analytic(pkt, T, p);

  SamplingGrid g;
  g.n_x = n_x | 1;
  const double sigma_x = 1.0 / (2.0 * std::sqrt(ev.theta1.real()));
  g.x_min = ev.mean_x - (g.window_sigmas + 1.0) * sigma_x;
  g.x_max = ev.mean_x + (g.window_sigmas + 1.0) * sigma_x;

  const double q_max = g.window_sigmas / std::sqrt(2.0 * pkt.theta.real());
  const double grad = (2.0 * std::abs(f.c_aa) * q_max +
                       std::max(std::abs(f.c_ab * g.x_min + pkt.v0),
                                std::abs(f.c_ab * g.x_max + pkt.v0))) /
                      p.hbar;
  const double nodes_needed = 2.0 * q_max * grad / (std::numbers::pi / 4.0);
  g.panels = std::max(64, (int)std::ceil(nodes_needed / 20.0 * 1.5));
  return g;
}

SampledWavefunction evolve_quadrature(const GaussianPacket& pkt, double T, const DampedParams& p,
                                      const SamplingGrid& grid) {
  require(T > 0.0, "evolve_quadrature: T must be > 0");
  require(pkt.theta.real() > 0.0, "evolve_quadrature: Re(theta) must be > 0");
  require(pkt.center == 0.0, "evolve_quadrature: nonzero packet center is out of scope");
  require(grid.n_x >= 5, "evolve_quadrature: n_x must be >= 5");
  require(grid.panels >= 1, "evolve_quadrature: panels must be >= 1");
  require(grid.x_max > grid.x_min, "evolve_quadrature: empty x window");
  const KernelQuadraticForm f = kernel_coeffs(T, p);
  const double h = p.hbar;

  const double q_max = grid.window_sigmas / std::sqrt(2.0 * pkt.theta.real());
  const double grad = (2.0 * std::abs(f.c_aa) * q_max +
                       std::max(std::abs(f.c_ab * grid.x_min + pkt.v0),
                                std::abs(f.c_ab * grid.x_max + pkt.v0))) /
                      h;
  const double advance_per_node = grad * (2.0 * q_max) / (grid.panels * 20.0);
  if (advance_per_node > std::numbers::pi / 4.0) {
    const int needed = (int)std::ceil(grad * 2.0 * q_max / (std::numbers::pi / 4.0) / 20.0);
    throw UnderResolvedGrid("evolve_quadrature: estimated phase advance per node " +
                            std::to_string(advance_per_node) + " rad exceeds pi/4; use at least " +
                            std::to_string(needed) + " panels");
  }

  const GaussRule& rule = gauss20();
  const size_t n_q = (size_t)grid.panels * rule.x.size();
  std::vector<double> q(n_q), w(n_q);
  const double panel_w = 2.0 * q_max / grid.panels;
  for (int pi = 0; pi < grid.panels; ++pi) {
    const double lo = -q_max + pi * panel_w;
    for (size_t j = 0; j < rule.x.size(); ++j) {
      q[pi * rule.x.size() + j] = lo + 0.5 * panel_w * (rule.x[j] + 1.0);
      w[pi * rule.x.size() + j] = 0.5 * panel_w * rule.w[j];
    }
  }

  // Per-source factors: weight * prefactor * exp(i c_aa q^2 / h) * psi0(q).
  std::vector<Complex> src(n_q);
  for (size_t i = 0; i < n_q; ++i) {
    const Complex psi0 =
        pkt.norm_factor * std::exp(-pkt.theta * q[i] * q[i] + kI * pkt.v0 * q[i] / h);
    src[i] = w[i] * f.prefactor.value() * std::exp(kI * f.c_aa * q[i] * q[i] / h) * psi0;
  }

  SampledWavefunction out;
  out.x.resize(grid.n_x);
  out.psi.resize(grid.n_x);
  out.dpsi.resize(grid.n_x);
  const double dx = (grid.x_max - grid.x_min) / (grid.n_x - 1);
  for (int jx = 0; jx < grid.n_x; ++jx) {
    const double x = grid.x_min + jx * dx;
    const Complex xfac = std::exp(kI * f.c_bb * x * x / h);
    Complex acc{0.0, 0.0}, dacc{0.0, 0.0};
    for (size_t i = 0; i < n_q; ++i) {
      const Complex term = src[i] * std::exp(kI * f.c_ab * x * q[i] / h);
      acc += term;
      dacc += term * (kI * (2.0 * f.c_bb * x + f.c_ab * q[i]) / h);
    }
    out.x[jx] = x;
    out.psi[jx] = acc * xfac;
    out.dpsi[jx] = dacc * xfac;
  }
  return out;
}

double mean_position(double T, const DampedParams& p, double v0) {
  require(T >= 0.0, "mean_position: T must be >= 0");
  if (p.kappa == 0.0) return v0 * T;
  return v0 * std::tanh(p.kappa * T) / p.kappa;
}

double mean_velocity(double T, const DampedParams& p, double v0) {
  require(T >= 0.0, "mean_velocity: T must be >= 0");
  if (T == 0.0 || p.kappa == 0.0) return v0;
  const double factor = 2.0 * p.kappa * std::tanh(p.kappa * T / 2.0) / std::expm1(-p.kappa * T);
  return factor * mean_position(T, p, v0) + v0;
}

Complex theta1_formula(double T, const DampedParams& p, Complex alpha0) {
  require(T > 0.0, "theta1_formula: T must be > 0");
  require(p.kappa > 0.0, "theta1_formula: kappa must be > 0");
  require(alpha0.real() > 0.0, "theta1_formula: Re(alpha0) must be > 0");
  const double h = p.hbar;
  const double kT = p.kappa * T;
  const double tkT = std::tanh(kT);
  const double th2 = std::tanh(kT / 2.0);
  const double num = tkT * tkT / (h * h * p.kappa * p.kappa);
  const double inner =
      p.kappa / (2.0 * tkT) - p.kappa * th2 - p.kappa * th2 / std::expm1(-kT);
  return num / (4.0 * (alpha0 - kI * inner / h));
}

double velocity_zero_crossing(const DampedParams& p) {
  require(p.kappa > 0.0, "velocity_zero_crossing: kappa must be > 0");
  // v0 factors out of the mean velocity; bisect the shape factor.
  const auto shape = [&](double T) {
    return 1.0 - 2.0 * std::tanh(p.kappa * T) / (1.0 + std::exp(-p.kappa * T));
  };
  double lo = 0.0, hi = 2.0 / p.kappa;
  for (int i = 0; i < 200 && (hi - lo) > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (shape(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

GaussianFit fit_gaussian_density(const SampledWavefunction& s) {
  const LogQuadraticFit fit = fit_log_quadratic(s);
  GaussianFit g;
  g.width_re = -fit.c2.real();
  g.mean = fit.xc - fit.c1.real() / (2.0 * fit.c2.real());
  g.residual = fit.density_residual;
  return g;
}

QuadratureObservables observables_from_samples(const SampledWavefunction& s, double hbar) {
  const size_t n = s.x.size();
  require(n >= 5 && n % 2 == 1, "observables_from_samples: need an odd sample count");
  require(s.psi.size() == n && s.dpsi.size() == n, "observables_from_samples: ragged samples");
  const double dx = s.x[1] - s.x[0];

  // Simpson weights 1,4,2,...,4,1 scaled by dx/3.
  const auto simpson = [&](const auto& f) {
    double acc = f(0) + f(n - 1);
    for (size_t i = 1; i + 1 < n; ++i) acc += f(i) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * dx / 3.0;
  };

  QuadratureObservables obs;
  obs.norm = simpson([&](size_t i) { return std::norm(s.psi[i]); });
  obs.mean_x = simpson([&](size_t i) { return s.x[i] * std::norm(s.psi[i]); }) / obs.norm;
  obs.mean_v =
      hbar * simpson([&](size_t i) { return std::imag(std::conj(s.psi[i]) * s.dpsi[i]); }) /
      obs.norm;
  const LogQuadraticFit fit = fit_log_quadratic(s);
  obs.theta1 = -fit.c2;
  obs.fit_residual = fit.density_residual;
  return obs;
}

double l2_distance(const SampledWavefunction& s, const EvolvedPacket& ev) {
  const size_t n = s.x.size();
  require(n >= 2 && s.psi.size() == n, "l2_distance: ragged samples");
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double xi = s.x[i] - ev.mean_x;
    const Complex ref = ev.amp * std::exp(-ev.theta1 * xi * xi) *
                        std::exp(kI * (ev.phase_linear * xi + ev.phase_const));
    num += std::norm(s.psi[i] - ref);
    den += std::norm(ref);
  }
  return std::sqrt(num / den);
}

}  // namespace qdamp
