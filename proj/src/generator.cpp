#include "drivenosc/generator.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace drivenosc {

std::string to_string(QuantizationMode mode) {
  return mode == QuantizationMode::ConstantOfMotion ? "k" : "h";
}

Generator build_h_generator(const Params& params) {
  const double lambda = params.drive_strength;
  const double rho = params.rho;
  return Generator{
      QuantizationMode::Hamiltonian,
      params,
      [](double) { return 0.0; },
      [lambda, rho](double tau) {
        return Complex(-lambda * std::sin(rho * tau), 0.0);
      },
  };
}

Generator build_k_generator(const Params& params, KCoefficientForm form) {
  const double rho = params.rho;
  double couple;  // prefactor of (sin - i rho cos)
  double shift;   // prefactor of -sin^2 on the diagonal
  if (form == KCoefficientForm::Reduced) {
    const double lambda = params.drive_strength;
    couple = lambda / (rho * rho - 1.0);
    shift = lambda * lambda / (rho * rho - 1.0);
  } else {
    // Raw prefactors; dimensionally inconsistent, comparison runs only.
    couple = params.epsilon * std::sqrt(2.0 * params.hbar_bar) * (1.0 - rho);
    shift = params.epsilon * params.epsilon /
            (2.0 * params.hbar_bar * (1.0 - rho * rho));
  }
  return Generator{
      QuantizationMode::ConstantOfMotion,
      params,
      [shift, rho](double tau) {
        const double s = std::sin(rho * tau);
        return -shift * s * s;
      },
      [couple, rho](double tau) {
        return couple *
               Complex(std::sin(rho * tau), -rho * std::cos(rho * tau));
      },
  };
}

FockState apply_generator(const Generator& gen, const FockState& state,
                          double tau) {
  const std::size_t dim = state.dim();
  const double d = gen.diag_shift(tau);
  const Complex g = gen.coupling(tau);
  const Complex gc = std::conj(g);

  std::vector<Complex> out(dim);
  for (std::size_t m = 0; m < dim; ++m) {
    Complex acc = (static_cast<double>(m) + 0.5 + d) * state[m];
    if (m + 1 < dim) {
      acc += g * std::sqrt(static_cast<double>(m + 1)) * state[m + 1];
    }
    if (m > 0) {
      acc += gc * std::sqrt(static_cast<double>(m)) * state[m - 1];
    }
    out[m] = acc;
  }
  return FockState(std::move(out), tau);
}

std::vector<Complex> dense_generator_matrix(const Generator& gen,
                                            std::size_t dim, double tau) {
  if (dim < 2) {
    throw std::invalid_argument("dense_generator_matrix: dim must be >= 2");
  }
  const double d = gen.diag_shift(tau);
  const Complex g = gen.coupling(tau);

  std::vector<Complex> m(dim * dim, Complex(0.0, 0.0));
  for (std::size_t row = 0; row < dim; ++row) {
    m[row * dim + row] = Complex(static_cast<double>(row) + 0.5 + d, 0.0);
    if (row + 1 < dim) {
      const double s = std::sqrt(static_cast<double>(row + 1));
      m[row * dim + row + 1] = g * s;
      m[(row + 1) * dim + row] = std::conj(g) * s;
    }
  }
  return m;
}

double hermiticity_audit(const Generator& gen, std::size_t dim,
                         std::span<const double> taus) {
  double worst = 0.0;
  for (double tau : taus) {
    const std::vector<Complex> m = dense_generator_matrix(gen, dim, tau);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        const double asym = std::abs(m[i * dim + j] - std::conj(m[j * dim + i]));
        if (asym > worst) {
          worst = asym;
        }
      }
    }
  }
  return worst;
}

}  // namespace drivenosc
