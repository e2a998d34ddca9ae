#pragma once

#include "drivenosc/config.hpp"
#include "drivenosc/generator.hpp"
#include "drivenosc/observables.hpp"

namespace drivenosc {

// One classical four-stage Runge-Kutta step of c' = -i M(tau) c. dt may be
// negative (backward integration); dt == 0 returns the state unchanged.
FockState rk4_step(const Generator& gen, const FockState& state, double tau,
                   double dt);

struct StepResult {
  FockState state;  // advanced state if accepted, the input state otherwise
  bool accepted;
  double dt_next;   // controller proposal, clamped to [0.2 dt, 5 dt]
};

// One embedded Dormand-Prince 5(4) attempt with PI step-size control.
// Requires dt > 0.
StepResult rk45_step(const Generator& gen, const FockState& state, double tau,
                     double dt, const StepControl& ctrl);

// Integrates c' = -i M(tau) c from tau = 0 to tau_end, recording a sample
// every sample_every (plus tau = 0 and tau_end). The state is never
// renormalized; norm drift is reported in the stats. The initial state must
// be normalized to within 1e-12 and carry tau = 0.
//
// Throws TruncationOverflowError when max_dim is reached with the tail guard
// still tripped, and StiffnessError when the adaptive step underflows.
TimeSeries propagate(const Generator& gen, const FockState& init,
                     double tau_end, const StepControl& ctrl,
                     const TruncationPolicy& policy, double sample_every);

}  // namespace drivenosc
