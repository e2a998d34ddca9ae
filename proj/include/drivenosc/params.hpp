#pragma once

namespace drivenosc {

// Dimensionless parameter set of the driven oscillator: drive amplitude
// epsilon, effective Planck constant hbar_bar, drive/oscillator frequency
// ratio rho, plus the derived drive strength
//   lambda = epsilon * rho * sqrt(hbar_bar / 2)
// shared by both generator builders. rho = 1 (resonance) is rejected at
// construction; the constant of motion does not exist there.
struct Params {
  double epsilon;
  double hbar_bar;
  double rho;
  double drive_strength;

  Params(double epsilon, double hbar_bar, double rho);
};

}  // namespace drivenosc
