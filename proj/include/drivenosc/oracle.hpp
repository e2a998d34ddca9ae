#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "drivenosc/generator.hpp"

namespace drivenosc {

// Dimensionful driven oscillator x'' = -omega^2 x + (A/m) sin(Omega t).
// Independent ground truth for the quantum side: its conserved quantity K and
// its exact linear-ODE solution.
struct ClassicalSystem {
  double mass;
  double omega;        // free oscillation frequency
  double amplitude;    // force amplitude A
  double drive_omega;  // Omega, must differ from omega

  ClassicalSystem(double mass, double omega, double amplitude,
                  double drive_omega);
};

struct ClassicalState {
  double x;
  double v;
  double t;
};

// Time-dependent constant of motion
//   K = (m/2)(v^2 + w^2 x^2)
//     + [A/(W^2-w^2)] (W v cos(W t) + w^2 x sin(W t))
//     - [A^2/(2m(W^2-w^2))] sin^2(W t)
// with w = omega, W = drive_omega. Invariant along trajectories.
double k_value(const ClassicalSystem& sys, const ClassicalState& s);

// k_value with the sign of the sin^2 term flipped. Verification negative
// control only: the flipped form is NOT conserved whenever A != 0.
double k_value_corrupted(const ClassicalSystem& sys, const ClassicalState& s);

// Fixed-step RK4 trajectory of (x, v) from s0 (s0.t must be 0), one entry per
// step including the initial state.
std::vector<ClassicalState> classical_propagate(const ClassicalSystem& sys,
                                                const ClassicalState& s0,
                                                double t_end, double dt);

// Exact solution (homogeneous + particular) of the linear system, for
// cross-checks. s0.t must be 0.
ClassicalState classical_closed_form(const ClassicalSystem& sys,
                                     const ClassicalState& s0, double t);

// max |K(t) - K(0)| / max(1, |K(0)|) along an RK4 trajectory.
double k_constancy_check(const ClassicalSystem& sys, const ClassicalState& s0,
                         double t_end, double dt);

// Same drift measure for the corrupted K (negative control).
double k_constancy_check_corrupted(const ClassicalSystem& sys,
                                   const ClassicalState& s0, double t_end,
                                   double dt);

// Displacement solution for the tridiagonal generator family: a vacuum state
// driven by M(tau) = N + 1/2 + d(tau) + g(tau) a + conj(g(tau)) a^+ stays
// coherent with parameter alpha(tau) solving
//   i d(alpha)/d(tau) = alpha + conj(g(tau)),  alpha(0) = 0,
// i.e. alpha(tau) = -i INT_0^tau e^{-i(tau-s)} conj(g(s)) ds. The scalar
// diagonal shift d(tau) only contributes a global phase and never enters
// probabilities (proof in docs/derivation.md). Level occupations are then
// Poisson with mean |alpha|^2.
//
// Evaluated by adaptive Gauss-Kronrod quadrature of the explicit integrand,
// absolute tolerance 1e-12.
Complex coherent_alpha(const Generator& gen, double tau);

// alpha over a whole increasing tau grid via the exact interval recursion
//   alpha(t2) = e^{-i(t2-t1)} alpha(t1) - i INT_{t1}^{t2} e^{-i(t2-s)} conj(g(s)) ds.
std::vector<Complex> coherent_alpha_series(const Generator& gen,
                                           std::span<const double> taus);

// Independent route to the same quantity: fixed-step RK4 on the scalar ODE.
Complex coherent_alpha_ode(const Generator& gen, double tau, double dt);

// Convenience bundle tying a generator to its displacement solution.
struct CoherentSolution {
  Generator gen;

  Complex alpha(double tau) const { return coherent_alpha(gen, tau); }
};

// Poisson level occupations p_n = e^{-mu} mu^n / n! with mu = |alpha|^2,
// computed through log-factorials. Returns nmax entries (n = 0..nmax-1);
// nmax must be >= 1.
std::vector<double> poisson_occupations(Complex alpha, std::size_t nmax);

// Closed-form <x^2> of a coherent state: (hbar_bar/2) (1 + (2 Re alpha)^2).
double coherent_x2(const Params& params, Complex alpha);

}  // namespace drivenosc
