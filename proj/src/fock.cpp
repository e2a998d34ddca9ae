#include "drivenosc/fock.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "drivenosc/errors.hpp"

namespace drivenosc {

FockState::FockState(std::vector<Complex> amplitudes, double tau)
    : amps_(std::move(amplitudes)), tau_(tau) {
  if (amps_.size() < 2) {
    throw std::invalid_argument("FockState needs at least 2 levels");
  }
  for (const Complex& a : amps_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw std::invalid_argument("FockState amplitudes must be finite");
    }
  }
}

FockState vacuum_state(std::size_t dim) {
  if (dim < 2) {
    throw std::invalid_argument("vacuum_state: dim must be >= 2");
  }
  std::vector<Complex> amps(dim, Complex(0.0, 0.0));
  amps[0] = Complex(1.0, 0.0);
  return FockState(std::move(amps), 0.0);
}

FockState apply_lowering(const FockState& state) {
  const std::size_t dim = state.dim();
  std::vector<Complex> out(dim, Complex(0.0, 0.0));
  for (std::size_t n = 1; n < dim; ++n) {
    out[n - 1] = std::sqrt(static_cast<double>(n)) * state[n];
  }
  return FockState(std::move(out), state.tau());
}

RaisingResult apply_raising(const FockState& state) {
  const std::size_t dim = state.dim();
  std::vector<Complex> out(dim, Complex(0.0, 0.0));
  for (std::size_t n = 0; n + 1 < dim; ++n) {
    out[n + 1] = std::sqrt(static_cast<double>(n + 1)) * state[n];
  }
  // The component raised out of the window: sqrt(dim) * c_{dim-1}.
  const double lost = static_cast<double>(dim) * std::norm(state[dim - 1]);
  return RaisingResult{FockState(std::move(out), state.tau()), lost};
}

double norm_squared(const FockState& state) {
  double acc = 0.0;
  for (const Complex& a : state.amplitudes()) {
    acc += std::norm(a);
  }
  return acc;
}

X2Matrix X2Matrix::build(std::size_t dim, const Params& params) {
  const double half_hbar = params.hbar_bar / 2.0;
  X2Matrix m;
  m.diag.resize(dim);
  m.off2.resize(dim >= 2 ? dim - 2 : 0);
  for (std::size_t n = 0; n < dim; ++n) {
    m.diag[n] = (2.0 * static_cast<double>(n) + 1.0) * half_hbar;
  }
  for (std::size_t n = 0; n + 2 < dim; ++n) {
    m.off2[n] = std::sqrt(static_cast<double>((n + 1) * (n + 2))) * half_hbar;
  }
  return m;
}

double x2_expectation(const FockState& state, const Params& params) {
  const std::size_t dim = state.dim();
  const X2Matrix x2 = X2Matrix::build(dim, params);

  // Contract both triangles of the band explicitly so the imaginary residue
  // is a real floating-point cancellation measure.
  Complex acc(0.0, 0.0);
  for (std::size_t n = 0; n < dim; ++n) {
    acc += std::conj(state[n]) * x2.diag[n] * state[n];
  }
  for (std::size_t n = 0; n + 2 < dim; ++n) {
    acc += std::conj(state[n]) * x2.off2[n] * state[n + 2];
    acc += std::conj(state[n + 2]) * x2.off2[n] * state[n];
  }

  const double n2 = norm_squared(state);
  if (std::abs(acc.imag()) > 1e-9 * n2) {
    std::ostringstream os;
    os << "x2_expectation: imaginary residue " << acc.imag()
       << " exceeds 1e-9 * norm^2 (" << 1e-9 * n2 << ")";
    throw HermiticityError(os.str());
  }
  return acc.real();
}

}  // namespace drivenosc
