#pragma once

#include <string>

#include "qdamp/types.hpp"

namespace qdamp {

/// LG is this engine's method; the others are the rival damping quantizations.
enum class MethodId { LG, KOCHAN, CK, DGST };

const char* method_name(MethodId m);
MethodId method_from_string(const std::string& s);

struct ObservableSet {
  double mean_x = 0.0;
  double mean_v = 0.0;
  Complex theta1 = {0.0, 0.0};
};

/// Closed-form observables per method. LG delegates to the wavepacket module
/// (its theta1 is the width derived by evolve_analytic, not the printed
/// formula); the rival formulas are implemented verbatim. At T = 0 every
/// method returns the shared initial condition (<x> = 0, <v> = v0,
/// theta1 = alpha0).
ObservableSet observables(MethodId m, double T, const DampedParams& p, double v0, Complex alpha0);

struct TimeInterval {
  double t_min = 0.0;
  double t_max = 0.0;
  bool unbounded = false;
};

/// Interval on which the method's mean velocity stays non-negative:
/// LG [0, ln(1+sqrt 2)/kappa], KOCHAN [0, ln 3/kappa], CK and DGST [0, inf).
TimeInterval reliability_interval(MethodId m, const DampedParams& p);

/// Large-T limit of <x>: v0/kappa for LG, CK, DGST; 2 v0/kappa for KOCHAN.
double asymptote(MethodId m, const DampedParams& p, double v0);

}  // namespace qdamp
