#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "drivenosc/config.hpp"
#include "drivenosc/fock.hpp"

namespace drivenosc {

struct PropagationStats {
  std::size_t steps_accepted = 0;
  std::size_t steps_rejected = 0;
  std::size_t growth_events = 0;
  std::size_t max_dim_reached = 0;
  // Worst top-2 level probability mass seen after any step (the truncation
  // leakage diagnostic; compare against TruncationPolicy::tail_guard).
  double max_tail_mass = 0.0;
  // Norm drift |norm^2 - 1|: max over samples, and at the final sample. The
  // propagator never renormalizes, so this measures integrator fidelity.
  double max_norm_drift = 0.0;
  double final_norm_drift = 0.0;
  // Samples whose norm^2 strayed from 1 by more than 1e-6 (recorded, not an
  // error; x^2 contraction assumes near-normalized states).
  std::size_t off_normal_samples = 0;
};

// Sampled trajectory: raw states plus the derived per-sample columns.
struct TimeSeries {
  explicit TimeSeries(RunMeta run_meta) : meta(std::move(run_meta)) {}

  RunMeta meta;
  PropagationStats stats;
  std::vector<double> taus;
  std::vector<FockState> states;
  std::vector<std::vector<double>> probs;  // |c_m|^2 per sample (ragged: the
                                           // basis may grow mid-run)
  std::vector<double> norm2;
  std::vector<double> x2;

  std::size_t size() const noexcept { return taus.size(); }

  // p_level at a sample; zero for levels above that sample's basis size.
  double prob(std::size_t sample, std::size_t level) const;

  // Highest level whose probability ever exceeds `floor`; 0 if none do.
  std::size_t max_level_above(double floor) const;
};

// p_m = |c_m|^2 for every level of the state.
std::vector<double> level_probabilities(const FockState& state);

struct CensusResult {
  double epsilon;
  QuantizationMode mode;
  std::size_t max_involved;
  double threshold;
};

// For each sample counts the levels with p_n > threshold and returns the
// maximum count over the trajectory. All levels are counted, including n=0.
// threshold must lie in (0, 1).
CensusResult excited_census(const TimeSeries& series, double threshold);

// Per-sample <x^2> recomputed from raw states (independent of any x2 column
// the propagator filled in).
std::vector<double> x2_series(std::span<const FockState> states,
                              const Params& params);

struct PeakSummary {
  double value;
  double tau;
};

// Maximum of p_level over the samples and the tau where it occurs; ties
// resolve to the earliest sample.
PeakSummary peak_summary(const TimeSeries& series, std::size_t level);

}  // namespace drivenosc
