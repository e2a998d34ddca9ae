#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "drivenosc/params.hpp"

namespace drivenosc {

using Complex = std::complex<double>;

// Truncated Fock-basis amplitude vector c_0 .. c_{dim-1} at dimensionless
// time tau. Immutable after construction; all operations return new states.
class FockState {
 public:
  explicit FockState(std::vector<Complex> amplitudes, double tau = 0.0);

  std::size_t dim() const noexcept { return amps_.size(); }
  double tau() const noexcept { return tau_; }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  const Complex& operator[](std::size_t n) const noexcept { return amps_[n]; }

 private:
  std::vector<Complex> amps_;
  double tau_;
};

// Ground state |0> in a dim-level basis, tau = 0. dim must be >= 2.
FockState vacuum_state(std::size_t dim);

// Lowering operator a: the amplitude at n-1 receives sqrt(n) c_n; the top
// slot ends up zero.
FockState apply_lowering(const FockState& state);

struct RaisingResult {
  FockState state;
  // Squared magnitude of the component pushed past the truncation window.
  double leakage;
};

// Raising operator a^+: the amplitude at n+1 receives sqrt(n+1) c_n; the
// component leaving the window is discarded and reported as leakage.
RaisingResult apply_raising(const FockState& state);

// Sum of |c_m|^2.
double norm_squared(const FockState& state);

// Banded matrix elements of x^2 = (hbar_bar/2)(a + a^+)^2 in the Fock basis.
struct X2Matrix {
  std::vector<double> diag;  // (2n+1) hbar_bar/2
  std::vector<double> off2;  // sqrt((n+1)(n+2)) hbar_bar/2, couples n and n+2

  static X2Matrix build(std::size_t dim, const Params& params);
};

// <state|x^2|state> contracted over the band. The full complex sum is formed
// and its imaginary residue checked; a residue above 1e-9 * norm^2 raises
// HermiticityError. Callers are expected to pass states normalized to within
// 1e-6; violations are not an error here (series-level code records them).
double x2_expectation(const FockState& state, const Params& params);

}  // namespace drivenosc
