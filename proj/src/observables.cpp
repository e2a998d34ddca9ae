#include "drivenosc/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace drivenosc {

double TimeSeries::prob(std::size_t sample, std::size_t level) const {
  const std::vector<double>& row = probs.at(sample);
  return level < row.size() ? row[level] : 0.0;
}

std::size_t TimeSeries::max_level_above(double floor) const {
  std::size_t top = 0;
  for (const std::vector<double>& row : probs) {
    for (std::size_t n = row.size(); n-- > 0;) {
      if (row[n] > floor) {
        if (n > top) {
          top = n;
        }
        break;
      }
    }
  }
  return top;
}

std::vector<double> level_probabilities(const FockState& state) {
  std::vector<double> p(state.dim());
  for (std::size_t n = 0; n < state.dim(); ++n) {
    p[n] = std::norm(state[n]);
  }
  return p;
}

CensusResult excited_census(const TimeSeries& series, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("excited_census: threshold must be in (0,1)");
  }
  std::size_t max_involved = 0;
  for (const std::vector<double>& row : series.probs) {
    std::size_t count = 0;
    for (double p : row) {
      if (p > threshold) {
        ++count;
      }
    }
    if (count > max_involved) {
      max_involved = count;
    }
  }
  return CensusResult{series.meta.params.epsilon, series.meta.mode,
                      max_involved, threshold};
}

std::vector<double> x2_series(std::span<const FockState> states,
                              const Params& params) {
  std::vector<double> out;
  out.reserve(states.size());
  for (const FockState& s : states) {
    out.push_back(x2_expectation(s, params));
  }
  return out;
}

PeakSummary peak_summary(const TimeSeries& series, std::size_t level) {
  if (series.size() == 0) {
    throw std::invalid_argument("peak_summary: empty series");
  }
  std::size_t max_dim = 0;
  for (const std::vector<double>& row : series.probs) {
    max_dim = std::max(max_dim, row.size());
  }
  if (level >= max_dim) {
    throw std::out_of_range("peak_summary: level beyond the basis size");
  }
  double best = -1.0;
  double best_tau = series.taus.front();
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double p = series.prob(i, level);
    if (p > best) {
      best = p;
      best_tau = series.taus[i];
    }
  }
  return PeakSummary{best, best_tau};
}

}  // namespace drivenosc
