#include "qdamp/comparators.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qdamp/wavepacket.hpp"

namespace qdamp {

namespace {

constexpr Complex kI{0.0, 1.0};

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

const char* method_name(MethodId m) {
  switch (m) {
    case MethodId::LG: return "LG";
    case MethodId::KOCHAN: return "KOCHAN";
    case MethodId::CK: return "CK";
    case MethodId::DGST: return "DGST";
  }
  throw std::invalid_argument("method_name: unknown method");
}

MethodId method_from_string(const std::string& s) {
  std::string up(s);
  for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "LG") return MethodId::LG;
  if (up == "KOCHAN" || up == "KOCH") return MethodId::KOCHAN;
  if (up == "CK") return MethodId::CK;
  if (up == "DGST") return MethodId::DGST;
  throw std::invalid_argument("unknown method '" + s + "' (expected LG, KOCHAN, CK, DGST)");
}

ObservableSet observables(MethodId m, double T, const DampedParams& p, double v0,
                          Complex alpha0) {
  require(T >= 0.0, "observables: T must be >= 0");
  require(p.kappa > 0.0, "observables: kappa must be > 0");
  if (T == 0.0) return {0.0, v0, alpha0};  // shared initial condition, identity evolution

  const double h = p.hbar;
  const double kT = p.kappa * T;
  ObservableSet obs;
  switch (m) {
    case MethodId::LG: {
      obs.mean_x = mean_position(T, p, v0);
      obs.mean_v = mean_velocity(T, p, v0);
      obs.theta1 = evolve_analytic(make_packet(alpha0, v0, h), T, p).theta1;
      break;
    }
    case MethodId::KOCHAN: {
      obs.mean_x = 2.0 * v0 * std::tanh(kT / 2.0) / p.kappa;
      obs.mean_v = 2.0 * v0 / (1.0 + std::exp(-kT)) - 1.5 * p.kappa * obs.mean_x;
      const double th2 = std::tanh(kT / 2.0);
      const double num = p.kappa * p.kappa / (16.0 * h * h * th2 * th2);
      const Complex den = alpha0 - kI * p.kappa * (3.0 - std::exp(-kT)) / (4.0 * h * -std::expm1(kT));
      obs.theta1 = num / den;
      break;
    }
    case MethodId::CK:
    case MethodId::DGST: {
      const double growth = -std::expm1(-kT);  // 1 - e^{-kappa T}
      obs.mean_x = v0 / p.kappa * growth;
      obs.mean_v = m == MethodId::CK ? v0 : v0 * std::exp(kT);
      const double num = p.kappa * p.kappa / (4.0 * h * h * growth * growth);
      const Complex den = alpha0 - kI * p.kappa / (2.0 * h * growth);
      obs.theta1 = num / den;
      break;
    }
  }
  return obs;
}

TimeInterval reliability_interval(MethodId m, const DampedParams& p) {
  require(p.kappa > 0.0, "reliability_interval: kappa must be > 0");
  switch (m) {
    case MethodId::LG: return {0.0, std::log(1.0 + std::numbers::sqrt2) / p.kappa, false};
    case MethodId::KOCHAN: return {0.0, std::log(3.0) / p.kappa, false};
    case MethodId::CK:
    case MethodId::DGST:
      return {0.0, std::numeric_limits<double>::infinity(), true};
  }
  throw std::invalid_argument("reliability_interval: unknown method");
}

double asymptote(MethodId m, const DampedParams& p, double v0) {
  require(p.kappa > 0.0, "asymptote: kappa must be > 0");
  return m == MethodId::KOCHAN ? 2.0 * v0 / p.kappa : v0 / p.kappa;
}

}  // namespace qdamp
