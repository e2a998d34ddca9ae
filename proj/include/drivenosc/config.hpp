#pragma once

#include <cstddef>

#include "drivenosc/generator.hpp"
#include "drivenosc/params.hpp"

namespace drivenosc {

enum class StepMethod { Rk4Fixed, Rk45Adaptive };

struct StepControl {
  StepMethod method = StepMethod::Rk45Adaptive;
  // Fixed step for Rk4Fixed; initial step for Rk45Adaptive. In tau units.
  double dt = 1e-3;
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double max_step = 1e-2;
};

// Basis enlargement policy. After each step the top-2 level probability mass
// is checked; above tail_guard the basis is enlarged by growth_factor
// (amplitudes zero-padded) and the step retried, up to max_dim.
//
// The guard default is deliberately deep: a wavefront that reaches the top
// level with probability p leaves O(sqrt(p)) amplitude errors behind, so
// holding reported probabilities stable to 1e-8 under basis doubling needs a
// guard far below 1e-12. 1e-20 achieves that at no extra cost (Poisson tails
// are steep, so the reached basis size is unchanged).
struct TruncationPolicy {
  std::size_t initial_dim = 64;
  double tail_guard = 1e-20;
  double growth_factor = 2.0;
  std::size_t max_dim = 4096;
};

// The resolved settings a propagation actually ran with; echoed into every
// output so a run is reproducible from its own metadata.
struct RunMeta {
  Params params;
  QuantizationMode mode;
  StepControl control;
  TruncationPolicy policy;
  double tau_end;
  double sample_every;
};

}  // namespace drivenosc
