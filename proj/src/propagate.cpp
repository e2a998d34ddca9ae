#include "drivenosc/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "drivenosc/errors.hpp"

namespace drivenosc {

namespace {

using Amps = std::vector<Complex>;

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,     0.0,        500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0.0};
// Difference between the 5th- and the embedded 4th-order weights.
constexpr double kErr[7] = {71.0 / 57600,       0.0,        -71.0 / 16695,
                            71.0 / 1920,        -17253.0 / 339200,
                            22.0 / 525,         -1.0 / 40};

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;
constexpr double kDtFloor = 1e-12;

// Reusable stage buffers plus a sqrt(m+1) cache so the inner loops stay
// allocation-free.
class Stepper {
 public:
  void ensure_dim(std::size_t dim) {
    if (sq_.size() >= dim) {
      return;
    }
    sq_.resize(dim);
    for (std::size_t m = 0; m < dim; ++m) {
      sq_[m] = std::sqrt(static_cast<double>(m + 1));
    }
  }

  // out = -i M(tau) c
  void rhs(const Generator& gen, double tau, const Amps& c, Amps& out) {
    const std::size_t dim = c.size();
    ensure_dim(dim);
    out.resize(dim);
    const double d = gen.diag_shift(tau);
    const Complex g = gen.coupling(tau);
    const Complex gc = std::conj(g);
    for (std::size_t m = 0; m < dim; ++m) {
      Complex acc = (static_cast<double>(m) + 0.5 + d) * c[m];
      if (m + 1 < dim) {
        acc += g * sq_[m] * c[m + 1];
      }
      if (m > 0) {
        acc += gc * sq_[m - 1] * c[m - 1];
      }
      out[m] = Complex(acc.imag(), -acc.real());
    }
  }

  // Classical RK4 step into `out` (may alias nothing). dt of any sign.
  void rk4(const Generator& gen, double tau, double dt, const Amps& y,
           Amps& out) {
    const std::size_t dim = y.size();
    rhs(gen, tau, y, k1_);
    axpy(y, dt / 2, k1_, tmp_);
    rhs(gen, tau + dt / 2, tmp_, k2_);
    axpy(y, dt / 2, k2_, tmp_);
    rhs(gen, tau + dt / 2, tmp_, k3_);
    axpy(y, dt, k3_, tmp_);
    rhs(gen, tau + dt, tmp_, k4_);
    out.resize(dim);
    for (std::size_t m = 0; m < dim; ++m) {
      out[m] = y[m] + (dt / 6.0) * (k1_[m] + 2.0 * k2_[m] + 2.0 * k3_[m] +
                                    k4_[m]);
    }
  }

  // One Dormand-Prince 5(4) attempt. Fills `out` with the 5th-order result
  // and returns the scaled error norm (max over components of
  // |err_i| / (abs_tol + rel_tol * max(|y_i|, |out_i|))).
  double rk45(const Generator& gen, double tau, double dt, const Amps& y,
              const StepControl& ctrl, Amps& out) {
    const std::size_t dim = y.size();
    for (int i = 0; i < 7; ++i) {
      tmp_ = y;
      for (int j = 0; j < i; ++j) {
        if (kA[i][j] == 0.0) {
          continue;
        }
        const double w = dt * kA[i][j];
        const Amps& kj = stage(j);
        for (std::size_t m = 0; m < dim; ++m) {
          tmp_[m] += w * kj[m];
        }
      }
      rhs(gen, tau + kC[i] * dt, tmp_, stage(i));
    }
    out.resize(dim);
    double err_norm = 0.0;
    for (std::size_t m = 0; m < dim; ++m) {
      Complex ynew = y[m];
      Complex err(0.0, 0.0);
      for (int i = 0; i < 7; ++i) {
        if (kB5[i] != 0.0) {
          ynew += dt * kB5[i] * stage(i)[m];
        }
        if (kErr[i] != 0.0) {
          err += dt * kErr[i] * stage(i)[m];
        }
      }
      out[m] = ynew;
      const double scale =
          ctrl.abs_tol +
          ctrl.rel_tol * std::max(std::abs(y[m]), std::abs(ynew));
      err_norm = std::max(err_norm, std::abs(err) / scale);
    }
    return err_norm;
  }

 private:
  static void axpy(const Amps& y, double a, const Amps& k, Amps& out) {
    out.resize(y.size());
    for (std::size_t m = 0; m < y.size(); ++m) {
      out[m] = y[m] + a * k[m];
    }
  }

  Amps& stage(int i) { return stages_[static_cast<std::size_t>(i)]; }

  std::vector<double> sq_;
  Amps stages_[7];
  Amps k1_, k2_, k3_, k4_;
  Amps tmp_;
};

void validate_control(const StepControl& ctrl) {
  if (!(ctrl.dt > 0.0)) {
    throw std::invalid_argument("StepControl: dt must be > 0");
  }
  if (!(ctrl.rel_tol > 0.0) || !(ctrl.abs_tol > 0.0)) {
    throw std::invalid_argument("StepControl: tolerances must be > 0");
  }
  if (!(ctrl.max_step >= ctrl.dt)) {
    throw std::invalid_argument("StepControl: max_step must be >= dt");
  }
}

void validate_policy(const TruncationPolicy& policy) {
  if (policy.initial_dim < 4) {
    throw std::invalid_argument("TruncationPolicy: initial_dim must be >= 4");
  }
  if (!(policy.growth_factor > 1.0 && policy.growth_factor <= 2.0)) {
    throw std::invalid_argument(
        "TruncationPolicy: growth_factor must be in (1, 2]");
  }
  if (policy.max_dim < policy.initial_dim) {
    throw std::invalid_argument(
        "TruncationPolicy: max_dim must be >= initial_dim");
  }
  if (!(policy.tail_guard > 0.0)) {
    throw std::invalid_argument("TruncationPolicy: tail_guard must be > 0");
  }
}

double tail_mass(const Amps& y) {
  const std::size_t dim = y.size();
  return std::norm(y[dim - 1]) + std::norm(y[dim - 2]);
}

void record_sample(TimeSeries& ts, const Generator& gen, double tau,
                   const Amps& y) {
  std::vector<double> row(y.size());
  double n2 = 0.0;
  for (std::size_t m = 0; m < y.size(); ++m) {
    row[m] = std::norm(y[m]);
    n2 += row[m];
  }
  FockState state(Amps(y), tau);
  const double drift = std::abs(n2 - 1.0);
  ts.stats.max_norm_drift = std::max(ts.stats.max_norm_drift, drift);
  if (drift > 1e-6) {
    ++ts.stats.off_normal_samples;
  }
  ts.x2.push_back(x2_expectation(state, gen.params));
  ts.taus.push_back(tau);
  ts.states.push_back(std::move(state));
  ts.probs.push_back(std::move(row));
  ts.norm2.push_back(n2);
}

}  // namespace

FockState rk4_step(const Generator& gen, const FockState& state, double tau,
                   double dt) {
  if (dt == 0.0) {
    return FockState(Amps(state.amplitudes().begin(), state.amplitudes().end()),
                     tau);
  }
  Stepper st;
  Amps y(state.amplitudes().begin(), state.amplitudes().end());
  Amps out;
  st.rk4(gen, tau, dt, y, out);
  return FockState(std::move(out), tau + dt);
}

StepResult rk45_step(const Generator& gen, const FockState& state, double tau,
                     double dt, const StepControl& ctrl) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("rk45_step: dt must be > 0");
  }
  if (!(ctrl.rel_tol > 0.0) || !(ctrl.abs_tol > 0.0)) {
    throw std::invalid_argument("rk45_step: tolerances must be > 0");
  }
  Stepper st;
  Amps y(state.amplitudes().begin(), state.amplitudes().end());
  Amps out;
  const double err = st.rk45(gen, tau, dt, y, ctrl, out);
  if (std::isfinite(err) && err <= 1.0) {
    double fac = err == 0.0 ? kMaxFactor
                            : kSafety * std::pow(err, -0.2);
    fac = std::clamp(fac, kMinFactor, kMaxFactor);
    return StepResult{FockState(std::move(out), tau + dt), true, dt * fac};
  }
  const double fac =
      std::isfinite(err) ? std::clamp(kSafety * std::pow(err, -0.2),
                                      kMinFactor, 1.0)
                         : kMinFactor;
  return StepResult{state, false, dt * fac};
}

TimeSeries propagate(const Generator& gen, const FockState& init,
                     double tau_end, const StepControl& ctrl,
                     const TruncationPolicy& policy, double sample_every) {
  validate_control(ctrl);
  validate_policy(policy);
  if (!(tau_end > 0.0)) {
    throw std::invalid_argument("propagate: tau_end must be > 0");
  }
  if (!(sample_every > 0.0)) {
    throw std::invalid_argument("propagate: sample_every must be > 0");
  }
  if (init.tau() != 0.0) {
    throw std::invalid_argument("propagate: initial state must carry tau = 0");
  }
  if (std::abs(norm_squared(init) - 1.0) > 1e-12) {
    throw std::invalid_argument(
        "propagate: initial state must be normalized to within 1e-12");
  }

  std::size_t dim = std::max(policy.initial_dim, init.dim());
  if (dim > policy.max_dim) {
    throw std::invalid_argument("propagate: initial state exceeds max_dim");
  }
  Amps y(init.amplitudes().begin(), init.amplitudes().end());
  y.resize(dim, Complex(0.0, 0.0));

  TimeSeries ts(RunMeta{gen.params, gen.mode, ctrl, policy, tau_end,
                        sample_every});
  ts.stats.max_dim_reached = dim;
  record_sample(ts, gen, 0.0, y);

  Stepper st;
  st.ensure_dim(dim);
  Amps candidate;

  // Grows the basis (zero-padding the pre-step state) or throws when the cap
  // is hit. Returns true when the step must be retried at the new size.
  const auto handle_tail = [&](double tau_attempted) -> bool {
    if (tail_mass(candidate) <= policy.tail_guard) {
      return false;
    }
    if (dim >= policy.max_dim) {
      throw TruncationOverflowError(
          tau_attempted, dim, std::make_shared<const TimeSeries>(ts));
    }
    const auto wanted = static_cast<std::size_t>(
        std::ceil(static_cast<double>(dim) * policy.growth_factor));
    dim = std::min(policy.max_dim, std::max(wanted, dim + 1));
    y.resize(dim, Complex(0.0, 0.0));
    st.ensure_dim(dim);
    ++ts.stats.growth_events;
    ts.stats.max_dim_reached = dim;
    return true;
  };

  double tau = 0.0;
  double h_nat = ctrl.dt;       // adaptive controller's preferred step
  double err_prev = 1e-4;       // PI memory
  std::size_t next_sample = 1;  // index of the next sample boundary

  while (tau < tau_end - 1e-14) {
    const double target =
        std::min(tau_end, static_cast<double>(next_sample) * sample_every);

    if (ctrl.method == StepMethod::Rk4Fixed) {
      const double interval = target - tau;
      const auto nsub = static_cast<std::size_t>(
          std::max<long long>(1, std::llround(interval / ctrl.dt)));
      const double h = interval / static_cast<double>(nsub);
      for (std::size_t i = 0; i < nsub;) {
        const double t0 = tau + static_cast<double>(i) * h;
        st.rk4(gen, t0, h, y, candidate);
        if (handle_tail(t0 + h)) {
          continue;  // same sub-step, larger basis
        }
        y.swap(candidate);
        ts.stats.max_tail_mass =
            std::max(ts.stats.max_tail_mass, tail_mass(y));
        ++ts.stats.steps_accepted;
        ++i;
      }
      tau = target;
    } else {
      while (tau < target - 1e-14) {
        const double h_want = std::min(h_nat, ctrl.max_step);
        const double remaining = target - tau;
        const bool hits_target = h_want >= remaining;
        const double h = hits_target ? remaining : h_want;

        const double err = st.rk45(gen, tau, h, y, ctrl, candidate);
        if (std::isfinite(err) && err <= 1.0) {
          if (handle_tail(tau + h)) {
            continue;  // retry the same step at the larger basis
          }
          y.swap(candidate);
          tau = hits_target ? target : tau + h;
          ts.stats.max_tail_mass =
              std::max(ts.stats.max_tail_mass, tail_mass(y));
          ++ts.stats.steps_accepted;
          double fac = err == 0.0
                           ? kMaxFactor
                           : kSafety * std::pow(err, -0.17) *
                                 std::pow(err_prev, 0.04);
          fac = std::clamp(fac, kMinFactor, kMaxFactor);
          err_prev = std::max(err, 1e-4);
          if (!hits_target || h_want <= remaining) {
            h_nat = h * fac;
          }
        } else {
          ++ts.stats.steps_rejected;
          const double fac =
              std::isfinite(err)
                  ? std::clamp(kSafety * std::pow(err, -0.2), kMinFactor, 1.0)
                  : kMinFactor;
          h_nat = h * fac;
          if (h_nat < kDtFloor) {
            throw StiffnessError(tau, h_nat);
          }
        }
      }
      tau = target;
    }

    record_sample(ts, gen, tau, y);
    ++next_sample;
  }

  ts.stats.final_norm_drift = std::abs(ts.norm2.back() - 1.0);
  return ts;
}

}  // namespace drivenosc
