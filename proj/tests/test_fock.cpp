#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "drivenosc/errors.hpp"
#include "drivenosc/fock.hpp"

using drivenosc::Complex;
using drivenosc::FockState;
using drivenosc::Params;
using drivenosc::X2Matrix;

namespace {

// Brute-force oracle: dense (a + a^+) matrix squared and scaled by
// hbar_bar/2. Built in a basis two levels larger and then restricted, so the
// entries are the true <m|x^2|n> matrix elements rather than the square of a
// clipped operator.
std::vector<double> dense_x2_oracle(std::size_t dim, double hbar_bar) {
  const std::size_t big = dim + 2;
  std::vector<double> q(big * big, 0.0);  // a + a^+
  for (std::size_t n = 0; n + 1 < big; ++n) {
    const double s = std::sqrt(static_cast<double>(n + 1));
    q[n * big + n + 1] = s;  // a acting on |n+1>
    q[(n + 1) * big + n] = s;
  }
  std::vector<double> x2(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < big; ++k) {
        acc += q[i * big + k] * q[k * big + j];
      }
      x2[i * dim + j] = acc * hbar_bar / 2.0;
    }
  }
  return x2;
}

double dense_x2_expectation(const FockState& state, double hbar_bar) {
  const std::size_t dim = state.dim();
  const std::vector<double> x2 = dense_x2_oracle(dim, hbar_bar);
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      acc += std::conj(state[i]) * x2[i * dim + j] * state[j];
    }
  }
  return acc.real();
}

FockState random_state(std::size_t dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  std::vector<Complex> amps(dim);
  double n2 = 0.0;
  for (Complex& a : amps) {
    a = Complex(dist(rng), dist(rng));
    n2 += std::norm(a);
  }
  for (Complex& a : amps) {
    a /= std::sqrt(n2);
  }
  return FockState(std::move(amps), 0.0);
}

}  // namespace

TEST_SUITE("fock") {

TEST_CASE("vacuum state") {
  const FockState v4 = drivenosc::vacuum_state(4);
  CHECK(v4.dim() == 4);
  CHECK(v4[0] == Complex(1.0, 0.0));
  CHECK(v4[1] == Complex(0.0, 0.0));
  CHECK(v4[3] == Complex(0.0, 0.0));
  CHECK(v4.tau() == 0.0);
  CHECK(drivenosc::norm_squared(v4) == 1.0);

  const FockState v2 = drivenosc::vacuum_state(2);
  CHECK(v2.dim() == 2);
  CHECK(v2[0] == Complex(1.0, 0.0));

  CHECK(drivenosc::norm_squared(drivenosc::vacuum_state(64)) == 1.0);

  CHECK_THROWS_AS(drivenosc::vacuum_state(1), std::invalid_argument);
  CHECK_THROWS_AS(drivenosc::vacuum_state(0), std::invalid_argument);
}

TEST_CASE("state validation") {
  CHECK_THROWS_AS(FockState({Complex(1.0, 0.0)}), std::invalid_argument);
  CHECK_THROWS_AS(FockState({Complex(1.0, 0.0), Complex(NAN, 0.0)}),
                  std::invalid_argument);
}

TEST_CASE("lowering operator") {
  const FockState one({0.0, 1.0, 0.0});
  const FockState low1 = drivenosc::apply_lowering(one);
  CHECK(low1[0] == Complex(1.0, 0.0));
  CHECK(low1[1] == Complex(0.0, 0.0));
  CHECK(low1[2] == Complex(0.0, 0.0));

  const FockState two({0.0, 0.0, 1.0});
  const FockState low2 = drivenosc::apply_lowering(two);
  CHECK(low2[1].real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(low2[0] == Complex(0.0, 0.0));

  const FockState vac({1.0, 0.0, 0.0});
  const FockState low0 = drivenosc::apply_lowering(vac);
  CHECK(drivenosc::norm_squared(low0) == 0.0);
}

TEST_CASE("raising operator and leakage") {
  const auto up0 = drivenosc::apply_raising(FockState({1.0, 0.0, 0.0}));
  CHECK(up0.state[1] == Complex(1.0, 0.0));
  CHECK(up0.leakage == 0.0);

  const auto up1 = drivenosc::apply_raising(FockState({0.0, 1.0, 0.0}));
  CHECK(up1.state[2].real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  const auto clipped = drivenosc::apply_raising(FockState({0.0, 1.0}));
  CHECK(drivenosc::norm_squared(clipped.state) == 0.0);
  CHECK(clipped.leakage == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("ladder algebra on the truncation interior") {
  // a a^+ |n> = (n+1) |n> for every basis vector below the top level.
  const std::size_t dim = 12;
  for (std::size_t n = 0; n + 1 < dim; ++n) {
    std::vector<Complex> amps(dim, Complex(0.0, 0.0));
    amps[n] = Complex(1.0, 0.0);
    const FockState basis(std::move(amps), 0.0);
    const auto raised = drivenosc::apply_raising(basis);
    const FockState back = drivenosc::apply_lowering(raised.state);
    for (std::size_t m = 0; m < dim; ++m) {
      const Complex expected =
          m == n ? Complex(static_cast<double>(n + 1), 0.0) : Complex(0.0, 0.0);
      CHECK(std::abs(back[m] - expected) < 1e-14);
    }
  }
}

TEST_CASE("norm squared") {
  CHECK(drivenosc::norm_squared(FockState({1.0, 0.0})) == 1.0);
  CHECK(drivenosc::norm_squared(FockState({Complex(0.6, 0.0),
                                           Complex(0.0, 0.8)})) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(drivenosc::norm_squared(FockState({0.0, 0.0, 0.0})) == 0.0);
}

TEST_CASE("x2 matrix equals the dense ladder product") {
  const Params params(5.0, 0.4, 6.25);
  for (std::size_t dim : {2u, 3u, 8u, 16u}) {
    const X2Matrix banded = X2Matrix::build(dim, params);
    const std::vector<double> dense = dense_x2_oracle(dim, params.hbar_bar);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        double expected = 0.0;
        if (i == j) {
          expected = banded.diag[i];
        } else if (j == i + 2) {
          expected = banded.off2[i];
        } else if (i == j + 2) {
          expected = banded.off2[j];
        }
        CHECK(std::abs(dense[i * dim + j] - expected) <= 1e-14);
      }
    }
  }
}

TEST_CASE("x2 expectation values") {
  const Params params(5.0, 0.4, 6.25);

  CHECK(drivenosc::x2_expectation(drivenosc::vacuum_state(8), params) ==
        doctest::Approx(0.2).epsilon(1e-14));

  FockState first({0.0, 1.0, 0.0, 0.0});
  CHECK(drivenosc::x2_expectation(first, params) ==
        doctest::Approx(0.6).epsilon(1e-14));

  // (|0> + |2>)/sqrt(2): diagonal (0.2 + 1.0)/2 plus the sqrt(2)*hbar_bar/2
  // cross term; dense oracle value 0.6 + 0.2 sqrt(2).
  const double inv = 1.0 / std::sqrt(2.0);
  FockState mixed({Complex(inv, 0.0), 0.0, Complex(inv, 0.0), 0.0});
  const double expected = 0.6 + 0.2 * std::sqrt(2.0);
  CHECK(expected == doctest::Approx(0.8828427124746190).epsilon(1e-14));
  CHECK(drivenosc::x2_expectation(mixed, params) ==
        doctest::Approx(expected).epsilon(1e-14));
  CHECK(dense_x2_expectation(mixed, params.hbar_bar) ==
        doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("x2 expectation matches the dense oracle on random states") {
  const Params params(5.0, 0.4, 6.25);
  for (unsigned seed : {1u, 2u, 3u, 4u}) {
    const FockState state = random_state(14, seed);
    CHECK(drivenosc::x2_expectation(state, params) ==
          doctest::Approx(dense_x2_expectation(state, params.hbar_bar))
              .epsilon(1e-12));
  }
}

TEST_CASE("x2 expectation is global-phase invariant") {
  const Params params(5.0, 0.4, 6.25);
  const FockState state = random_state(10, 7u);
  const double base = drivenosc::x2_expectation(state, params);
  for (double phase : {0.3, 1.7, 2.9}) {
    const Complex rot(std::cos(phase), std::sin(phase));
    std::vector<Complex> amps(state.amplitudes().begin(),
                              state.amplitudes().end());
    for (Complex& a : amps) {
      a *= rot;
    }
    const double rotated =
        drivenosc::x2_expectation(FockState(std::move(amps), 0.0), params);
    CHECK(std::abs(rotated - base) <= 1e-14);
  }
}

TEST_CASE("params validation") {
  CHECK_THROWS_AS(Params(-1.0, 0.4, 6.25), std::invalid_argument);
  CHECK_THROWS_AS(Params(5.0, 0.0, 6.25), std::invalid_argument);
  CHECK_THROWS_AS(Params(5.0, -0.4, 6.25), std::invalid_argument);
  CHECK_THROWS_AS(Params(5.0, 0.4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Params(5.0, 0.4, 1.0), std::invalid_argument);

  const Params p(5.0, 0.4, 6.25);
  CHECK(p.drive_strength ==
        doctest::Approx(5.0 * 6.25 * std::sqrt(0.2)).epsilon(1e-15));
}

}  // TEST_SUITE
