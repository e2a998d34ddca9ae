#include "drivenosc/params.hpp"

#include <cmath>
#include <stdexcept>

namespace drivenosc {

Params::Params(double epsilon_in, double hbar_bar_in, double rho_in)
    : epsilon(epsilon_in),
      hbar_bar(hbar_bar_in),
      rho(rho_in),
      drive_strength(epsilon_in * rho_in * std::sqrt(hbar_bar_in / 2.0)) {
  if (!(epsilon >= 0.0)) {
    throw std::invalid_argument("epsilon must be >= 0");
  }
  if (!(hbar_bar > 0.0)) {
    throw std::invalid_argument("hbar_bar must be > 0");
  }
  if (!(rho > 0.0)) {
    throw std::invalid_argument("rho must be > 0");
  }
  if (rho == 1.0) {
    throw std::invalid_argument(
        "rho = 1 is the resonant case; the constant of motion is undefined");
  }
}

}  // namespace drivenosc
