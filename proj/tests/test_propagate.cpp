#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "drivenosc/errors.hpp"
#include "drivenosc/propagate.hpp"
#include "drivenosc/verify.hpp"

using drivenosc::Complex;
using drivenosc::FockState;
using drivenosc::Generator;
using drivenosc::Params;
using drivenosc::QuantizationMode;
using drivenosc::StepControl;
using drivenosc::StepMethod;
using drivenosc::TimeSeries;
using drivenosc::TruncationPolicy;

namespace {

const StepControl kRk45{StepMethod::Rk45Adaptive, 1e-3, 1e-10, 1e-14, 1e-2};

StepControl fixed_rk4(double dt) {
  return StepControl{StepMethod::Rk4Fixed, dt, 1e-10, 1e-14,
                     std::max(dt, 1e-2)};
}

double max_state_diff(const FockState& a, const FockState& b) {
  const std::size_t dim = std::max(a.dim(), b.dim());
  double worst = 0.0;
  for (std::size_t n = 0; n < dim; ++n) {
    const Complex ca = n < a.dim() ? a[n] : Complex(0.0, 0.0);
    const Complex cb = n < b.dim() ? b[n] : Complex(0.0, 0.0);
    worst = std::max(worst, std::abs(ca - cb));
  }
  return worst;
}

}  // namespace

TEST_SUITE("propagate") {

TEST_CASE("free ground state is exact") {
  const Params params(0.0, 0.4, 6.25);
  const TruncationPolicy policy{8, 1e-12, 2.0, 64};
  for (const Generator& gen : {drivenosc::build_h_generator(params),
                               drivenosc::build_k_generator(params)}) {
    const TimeSeries ts = drivenosc::propagate(
        gen, drivenosc::vacuum_state(8), 20.0, kRk45, policy, 0.01);
    REQUIRE(ts.size() == 2001);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      CHECK(std::abs(ts.prob(i, 0) - 1.0) <= 1e-12);
    }
    CHECK(ts.stats.steps_rejected == 0);
    // Every step lands at the 0.01 cap after the startup ramp.
    CHECK(ts.stats.steps_accepted <= 2010);
    // phase of c_0 is e^{-i tau / 2}
    for (std::size_t i = 0; i < ts.size(); i += 400) {
      const Complex expected =
          std::exp(Complex(0.0, -ts.taus[i] / 2.0));
      CHECK(std::abs(ts.states[i][0] - expected) <= 1e-8);
    }
  }
}

TEST_CASE("free oscillator series is mode independent") {
  const Params params(0.0, 0.4, 6.25);
  const TruncationPolicy policy{8, 1e-12, 2.0, 64};
  const TimeSeries h = drivenosc::propagate(
      drivenosc::build_h_generator(params), drivenosc::vacuum_state(8), 20.0,
      kRk45, policy, 0.01);
  const TimeSeries k = drivenosc::propagate(
      drivenosc::build_k_generator(params), drivenosc::vacuum_state(8), 20.0,
      kRk45, policy, 0.01);
  for (std::size_t i = 0; i < h.size(); ++i) {
    CHECK(std::abs(h.x2[i] - k.x2[i]) <= 1e-10);
    for (std::size_t n = 0; n < 8; ++n) {
      CHECK(std::abs(h.prob(i, n) - k.prob(i, n)) <= 1e-10);
    }
  }
}

TEST_CASE("rk4_step basics") {
  const Params params(0.0, 0.4, 6.25);
  const Generator gen = drivenosc::build_h_generator(params);
  const FockState vac = drivenosc::vacuum_state(4);

  // dt = 0 is the identity.
  const FockState same = drivenosc::rk4_step(gen, vac, 0.0, 0.0);
  CHECK(same[0] == vac[0]);
  CHECK(same.tau() == 0.0);

  // Diagonal evolution: phase advance -dt/2 on c_0.
  const double dt = 1e-3;
  const FockState stepped = drivenosc::rk4_step(gen, vac, 0.0, dt);
  const Complex expected = std::exp(Complex(0.0, -dt / 2.0));
  CHECK(std::abs(stepped[0] - expected) <= 1e-15);
  CHECK(stepped.tau() == dt);

  // Backward step undoes the forward step to fifth order.
  const FockState back = drivenosc::rk4_step(gen, stepped, dt, -dt);
  CHECK(std::abs(back[0] - Complex(1.0, 0.0)) <= 1e-14);
}

TEST_CASE("rk4 local order via step doubling") {
  const Params params(5.0, 0.4, 6.25);
  const Generator gen = drivenosc::build_h_generator(params);
  const FockState start = drivenosc::vacuum_state(16);
  const double tau0 = 0.37;

  std::vector<double> diffs;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    const FockState full = drivenosc::rk4_step(gen, start, tau0, dt);
    const FockState half1 = drivenosc::rk4_step(gen, start, tau0, dt / 2.0);
    const FockState half2 =
        drivenosc::rk4_step(gen, half1, tau0 + dt / 2.0, dt / 2.0);
    diffs.push_back(max_state_diff(full, half2));
  }
  for (std::size_t i = 0; i + 1 < diffs.size(); ++i) {
    const double order = std::log2(diffs[i] / diffs[i + 1]);
    CHECK(order >= 3.8);
  }
}

TEST_CASE("rk45_step accept and reject") {
  const Params quiet(0.0, 0.4, 6.25);
  const Generator free_gen = drivenosc::build_h_generator(quiet);
  const FockState vac = drivenosc::vacuum_state(8);

  const auto ok = drivenosc::rk45_step(free_gen, vac, 0.0, 1e-2, kRk45);
  CHECK(ok.accepted);
  CHECK(ok.state.tau() == 1e-2);
  CHECK(ok.dt_next >= 0.2 * 1e-2);
  CHECK(ok.dt_next <= 5.0 * 1e-2);

  const Params loud(5.0, 0.4, 6.25);
  const Generator strong = drivenosc::build_h_generator(loud);
  StepControl tight = kRk45;
  tight.rel_tol = 1e-13;
  tight.abs_tol = 1e-16;
  const auto rejected =
      drivenosc::rk45_step(strong, drivenosc::vacuum_state(32), 1.0, 0.5,
                           tight);
  CHECK_FALSE(rejected.accepted);
  CHECK(rejected.dt_next < 0.5);
  CHECK(rejected.state.tau() == drivenosc::vacuum_state(32).tau());

  CHECK_THROWS_AS(drivenosc::rk45_step(free_gen, vac, 0.0, 0.0, kRk45),
                  std::invalid_argument);
}

TEST_CASE("input validation") {
  const Params params(1.0, 0.4, 6.25);
  const Generator gen = drivenosc::build_h_generator(params);
  const TruncationPolicy policy{};

  CHECK_THROWS_AS(drivenosc::propagate(gen, drivenosc::vacuum_state(8), 0.0,
                                       kRk45, policy, 0.01),
                  std::invalid_argument);
  CHECK_THROWS_AS(drivenosc::propagate(gen, drivenosc::vacuum_state(8), -1.0,
                                       kRk45, policy, 0.01),
                  std::invalid_argument);
  CHECK_THROWS_AS(drivenosc::propagate(gen, drivenosc::vacuum_state(8), 1.0,
                                       kRk45, policy, 0.0),
                  std::invalid_argument);

  const FockState unnormalized(std::vector<Complex>{Complex(0.5, 0.0),
                                                    Complex(0.0, 0.0)});
  CHECK_THROWS_AS(
      drivenosc::propagate(gen, unnormalized, 1.0, kRk45, policy, 0.01),
      std::invalid_argument);

  StepControl bad = kRk45;
  bad.dt = 0.0;
  CHECK_THROWS_AS(drivenosc::propagate(gen, drivenosc::vacuum_state(8), 1.0,
                                       bad, policy, 0.01),
                  std::invalid_argument);

  TruncationPolicy bad_policy{};
  bad_policy.initial_dim = 2;
  CHECK_THROWS_AS(drivenosc::propagate(gen, drivenosc::vacuum_state(8), 1.0,
                                       kRk45, bad_policy, 0.01),
                  std::invalid_argument);
  bad_policy = TruncationPolicy{};
  bad_policy.growth_factor = 3.0;
  CHECK_THROWS_AS(drivenosc::propagate(gen, drivenosc::vacuum_state(8), 1.0,
                                       kRk45, bad_policy, 0.01),
                  std::invalid_argument);
}

TEST_CASE("truncation overflow carries tau and partial output") {
  const Params params(5.0, 0.4, 6.25);
  const Generator gen = drivenosc::build_h_generator(params);
  const TruncationPolicy tiny{4, 1e-12, 2.0, 8};
  try {
    drivenosc::propagate(gen, drivenosc::vacuum_state(4), 5.0, kRk45, tiny,
                         0.01);
    FAIL("expected TruncationOverflowError");
  } catch (const drivenosc::TruncationOverflowError& err) {
    CHECK(err.tau() > 0.0);
    CHECK(err.dim() == 8);
    REQUIRE(err.partial_series() != nullptr);
    CHECK(err.partial_series()->size() >= 1);
  }
}

TEST_CASE("stiffness error on step underflow") {
  const Params params(5.0, 0.4, 6.25);
  const Generator gen = drivenosc::build_h_generator(params);
  StepControl impossible = kRk45;
  impossible.rel_tol = 1e-300;
  impossible.abs_tol = 1e-300;
  CHECK_THROWS_AS(drivenosc::propagate(gen, drivenosc::vacuum_state(16), 1.0,
                                       impossible, TruncationPolicy{}, 0.01),
                  drivenosc::StiffnessError);
}

TEST_CASE("fixed-step propagation is bitwise deterministic") {
  const Params params(5.0, 0.4, 6.25);
  const Generator gen = drivenosc::build_k_generator(params);
  const TruncationPolicy policy{16, 1e-12, 2.0, 128};
  const TimeSeries a = drivenosc::propagate(
      gen, drivenosc::vacuum_state(16), 2.0, fixed_rk4(1e-3), policy, 0.01);
  const TimeSeries b = drivenosc::propagate(
      gen, drivenosc::vacuum_state(16), 2.0, fixed_rk4(1e-3), policy, 0.01);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a.states[i].dim() == b.states[i].dim());
    for (std::size_t n = 0; n < a.states[i].dim(); ++n) {
      CHECK(a.states[i][n] == b.states[i][n]);
    }
  }
}

TEST_CASE("time reversal returns to the initial state") {
  const Params params(1.0, 0.4, 6.25);
  const Generator gen = drivenosc::build_h_generator(params);
  const double dt = 2e-4;
  const double tau_end = 5.0;
  const TruncationPolicy policy{32, 1e-12, 2.0, 256};

  const TimeSeries forward = drivenosc::propagate(
      gen, drivenosc::vacuum_state(32), tau_end, fixed_rk4(dt), policy, 0.01);
  FockState state = forward.states.back();

  const auto nsteps = static_cast<std::size_t>(std::llround(tau_end / dt));
  for (std::size_t i = 0; i < nsteps; ++i) {
    const double tau = tau_end - static_cast<double>(i) * dt;
    state = drivenosc::rk4_step(gen, state, tau, -dt);
  }
  CHECK(std::abs(state[0] - Complex(1.0, 0.0)) <= 1e-6);
  for (std::size_t n = 1; n < state.dim(); ++n) {
    CHECK(std::abs(state[n]) <= 1e-6);
  }
}

TEST_CASE("basis grows under strong drive") {
  StepControl loose = kRk45;
  loose.rel_tol = 1e-6;
  loose.abs_tol = 1e-10;
  const TruncationPolicy policy{};
  const TimeSeries ts = drivenosc::standard_run(
      QuantizationMode::Hamiltonian, 10.0, 4.0, loose, policy, 0.01);
  CHECK(ts.stats.growth_events >= 1);
  CHECK(ts.stats.max_dim_reached >= 128);
  CHECK(ts.stats.max_tail_mass <= policy.tail_guard);
}

TEST_CASE("norm drift stays tiny without renormalization") {
  const TimeSeries ts = drivenosc::standard_run(
      QuantizationMode::Hamiltonian, 5.0, 5.0, kRk45, TruncationPolicy{},
      0.01);
  CHECK(ts.stats.max_norm_drift <= 1e-8);
  CHECK(ts.stats.off_normal_samples == 0);
  // Per-sample probabilities sum to the recorded norm^2 and stay in range;
  // sample times are strictly increasing.
  for (std::size_t i = 0; i < ts.size(); i += 100) {
    double sum = 0.0;
    for (double p : ts.probs[i]) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0 + 1e-8);
      sum += p;
    }
    CHECK(std::abs(sum - ts.norm2[i]) <= 1e-12);
  }
  for (std::size_t i = 1; i < ts.size(); ++i) {
    CHECK(ts.taus[i] > ts.taus[i - 1]);
  }
}

TEST_CASE("tolerance tightening leaves x2 converged") {
  StepControl coarse = kRk45;
  coarse.rel_tol = 1e-6;
  const TimeSeries a = drivenosc::standard_run(
      QuantizationMode::Hamiltonian, 5.0, 10.0, coarse, TruncationPolicy{},
      0.01);
  const TimeSeries b = drivenosc::standard_run(
      QuantizationMode::Hamiltonian, 5.0, 10.0, kRk45, TruncationPolicy{},
      0.01);
  const double rel = std::abs(a.x2.back() - b.x2.back()) /
                     std::abs(b.x2.back());
  CHECK(rel < 1e-5);
}

}  // TEST_SUITE
