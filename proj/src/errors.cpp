#include "drivenosc/errors.hpp"

#include <sstream>

namespace drivenosc {

namespace {

std::string overflow_message(double tau, std::size_t dim) {
  std::ostringstream os;
  os << "truncation overflow: tail guard still tripped at the basis cap (dim="
     << dim << ") at tau=" << tau;
  return os.str();
}

std::string stiffness_message(double tau, double dt) {
  std::ostringstream os;
  os << "step size underflow (dt=" << dt << " < 1e-12) at tau=" << tau;
  return os.str();
}

}  // namespace

TruncationOverflowError::TruncationOverflowError(
    double tau, std::size_t dim, std::shared_ptr<const TimeSeries> partial)
    : std::runtime_error(overflow_message(tau, dim)),
      tau_(tau),
      dim_(dim),
      partial_(std::move(partial)) {}

StiffnessError::StiffnessError(double tau, double dt)
    : std::runtime_error(stiffness_message(tau, dt)), tau_(tau), dt_(dt) {}

HermiticityError::HermiticityError(const std::string& what)
    : std::runtime_error(what) {}

}  // namespace drivenosc
