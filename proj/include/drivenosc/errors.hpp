#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>

namespace drivenosc {

struct TimeSeries;

// Thrown when the basis hit max_dim while the tail guard was still tripped.
// Carries the offending tau and whatever samples were recorded before the
// failure so callers can flag partial output.
class TruncationOverflowError : public std::runtime_error {
 public:
  TruncationOverflowError(double tau, std::size_t dim,
                          std::shared_ptr<const TimeSeries> partial);

  double tau() const noexcept { return tau_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::shared_ptr<const TimeSeries>& partial_series() const noexcept {
    return partial_;
  }

 private:
  double tau_;
  std::size_t dim_;
  std::shared_ptr<const TimeSeries> partial_;
};

// Thrown when the adaptive step size collapses below the representable floor.
class StiffnessError : public std::runtime_error {
 public:
  StiffnessError(double tau, double dt);

  double tau() const noexcept { return tau_; }
  double dt() const noexcept { return dt_; }

 private:
  double tau_;
  double dt_;
};

// Thrown when a quadratic-form contraction that must be real develops a
// non-negligible imaginary part.
class HermiticityError : public std::runtime_error {
 public:
  explicit HermiticityError(const std::string& what);
};

}  // namespace drivenosc
