#pragma once

#include <string>
#include <vector>

#include "drivenosc/observables.hpp"
#include "drivenosc/propagate.hpp"

namespace drivenosc {

// Outcome of one verification check. `bound` is the gate the measurement is
// compared against; `lower_is_pass` distinguishes "measured <= bound" checks
// from negative controls that must EXCEED their bound.
struct CheckResult {
  std::string name;
  double measured;
  double bound;
  bool lower_is_pass;
  bool pass;
  std::string detail;
};

struct VerifyOptions {
  // Quick subset: short horizons, epsilon = 1 only, no cross-integrator run.
  bool quick = false;
  // Verification hook: scales the generator coupling g(tau) in the
  // displacement suite so tests can prove the suite detects coefficient
  // errors. 1.0 means unmodified.
  double coupling_scale = 1.0;
};

// Vacuum-initialized propagation at the shared defaults hbar_bar = 0.4,
// rho = 6.25. coupling_scale != 1 wraps the generator coupling (negative
// control hook).
TimeSeries standard_run(QuantizationMode mode, double epsilon, double tau_end,
                        const StepControl& ctrl, const TruncationPolicy& policy,
                        double sample_every, double coupling_scale = 1.0);

// Max over samples and levels of |p_n(numerical) - p_n(Poisson oracle)| for a
// vacuum-initialized series. Oracle alphas come from the quadrature route.
double displacement_deviation(const TimeSeries& series);

// Max over samples of |<x^2>(numerical) - (hbar_bar/2)(1 + (2 Re alpha)^2)|.
double coherent_x2_deviation(const TimeSeries& series);

// The full (or quick) verification battery: Hermitian structure audits,
// classical K constancy plus its negative control, displacement-oracle
// equivalence, norm drift, and (full only) the cross-integrator comparison.
std::vector<CheckResult> run_verification(const VerifyOptions& opts);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace drivenosc
