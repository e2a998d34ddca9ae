#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "drivenosc/fock.hpp"
#include "drivenosc/params.hpp"

namespace drivenosc {

enum class QuantizationMode { ConstantOfMotion, Hamiltonian };

// Short tags used in output files and reports: "k" / "h".
std::string to_string(QuantizationMode mode);

// Time-dependent Hermitian tridiagonal generator in the Fock basis:
//
//   M_{m,m}(tau)   = (m + 1/2) + d(tau)
//   M_{m,m+1}(tau) = g(tau) sqrt(m+1)
//   M_{m+1,m}(tau) = conj(g(tau)) sqrt(m+1)
//
// The propagated system is c'(tau) = -i M(tau) c(tau). Coefficients are pure
// functions of tau, so adaptive steppers may evaluate at arbitrary times.
struct Generator {
  QuantizationMode mode;
  Params params;
  std::function<double(double)> diag_shift;  // d(tau)
  std::function<Complex(double)> coupling;   // g(tau)
};

// Hamiltonian quantization: d(tau) = 0, g(tau) = -lambda sin(rho tau),
// real for all tau.
Generator build_h_generator(const Params& params);

// Coefficient form for the constant-of-motion generator. Reduced uses the
// coupling lambda/(rho^2-1) and diagonal -(lambda^2/(rho^2-1)) sin^2(rho tau)
// obtained by nondimensionalizing the dimensionful amplitude system (see
// docs/derivation.md). Raw keeps the prefactors epsilon*sqrt(2 hbar_bar)(1-rho)
// and epsilon^2/(2 hbar_bar (1-rho^2)); that set is dimensionally inconsistent
// and is retained only for comparison runs, with no correctness claims.
enum class KCoefficientForm { Reduced, Raw };

// Constant-of-motion quantization:
//   d(tau) = -(lambda^2/(rho^2-1)) sin^2(rho tau)
//   g(tau) = (lambda/(rho^2-1)) (sin(rho tau) - i rho cos(rho tau))
Generator build_k_generator(const Params& params,
                            KCoefficientForm form = KCoefficientForm::Reduced);

// M(tau) * state. Row m reads
//   [(m+1/2) + d(tau)] c_m + g(tau) sqrt(m+1) c_{m+1}
//                          + conj(g(tau)) sqrt(m) c_{m-1}.
// Note the time derivative propagated downstream is c' = -i M(tau) c.
FockState apply_generator(const Generator& gen, const FockState& state,
                          double tau);

// Dense row-major assembly of M(tau); brute-force audits and tests only.
std::vector<Complex> dense_generator_matrix(const Generator& gen,
                                            std::size_t dim, double tau);

// Assembles M(tau) at each sampled tau and returns the largest |M - M^dagger|
// entry seen. Guards the conjugate pairing of the off-diagonals.
double hermiticity_audit(const Generator& gen, std::size_t dim,
                         std::span<const double> taus);

}  // namespace drivenosc
