#include "drivenosc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drivenosc {

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule
// (positive half; nodes are symmetric about 0).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-index Kronrod nodes (1, 3, 5) and the center.
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  Complex integral;
  double error;
};

template <typename F>
Panel gk15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const Complex fc = f(center);
  Complex kronrod = kWgk[7] * fc;
  Complex gauss = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const Complex sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[i] * sum;
    if (i % 2 == 1) {
      gauss += kWg[i / 2] * sum;
    }
  }
  kronrod *= half;
  gauss *= half;
  return Panel{kronrod, std::abs(kronrod - gauss)};
}

// Adaptive bisection to an absolute tolerance. The integrands here are smooth
// and mildly oscillatory, so plain recursion converges fast.
template <typename F>
Complex adaptive_gk(const F& f, double a, double b, double tol, int depth = 0) {
  const Panel p = gk15(f, a, b);
  if (p.error <= tol || depth >= 48) {
    return p.integral;
  }
  const double mid = 0.5 * (a + b);
  return adaptive_gk(f, a, mid, 0.5 * tol, depth + 1) +
         adaptive_gk(f, mid, b, 0.5 * tol, depth + 1);
}

constexpr double kAlphaQuadTol = 1e-12;

// INT_{t0}^{t1} e^{-i(t1-s)} conj(g(s)) ds
Complex driven_segment(const Generator& gen, double t0, double t1) {
  const auto integrand = [&](double s) {
    const double phase = s - t1;
    return Complex(std::cos(phase), std::sin(phase)) *
           std::conj(gen.coupling(s));
  };
  return adaptive_gk(integrand, t0, t1, kAlphaQuadTol);
}

void validate_system(const ClassicalSystem& sys) {
  if (!(sys.mass > 0.0) || !(sys.omega > 0.0) || !(sys.drive_omega > 0.0)) {
    throw std::invalid_argument(
        "ClassicalSystem: mass, omega and drive_omega must be > 0");
  }
  if (!(sys.amplitude >= 0.0)) {
    throw std::invalid_argument("ClassicalSystem: amplitude must be >= 0");
  }
  if (sys.drive_omega == sys.omega) {
    throw std::invalid_argument(
        "ClassicalSystem: drive_omega = omega is the resonant case; the "
        "constant of motion is undefined");
  }
}

double k_value_impl(const ClassicalSystem& sys, const ClassicalState& s,
                    double last_term_sign) {
  const double w2 = sys.omega * sys.omega;
  const double denom = sys.drive_omega * sys.drive_omega - w2;
  const double st = std::sin(sys.drive_omega * s.t);
  const double ct = std::cos(sys.drive_omega * s.t);
  return 0.5 * sys.mass * (s.v * s.v + w2 * s.x * s.x) +
         (sys.amplitude / denom) * (sys.drive_omega * s.v * ct +
                                    w2 * s.x * st) +
         last_term_sign * sys.amplitude * sys.amplitude /
             (2.0 * sys.mass * denom) * st * st;
}

double k_drift(const ClassicalSystem& sys, const ClassicalState& s0,
               double t_end, double dt, double last_term_sign) {
  const std::vector<ClassicalState> traj =
      classical_propagate(sys, s0, t_end, dt);
  const double k0 = k_value_impl(sys, traj.front(), last_term_sign);
  double worst = 0.0;
  for (const ClassicalState& s : traj) {
    worst = std::max(worst,
                     std::abs(k_value_impl(sys, s, last_term_sign) - k0));
  }
  return worst / std::max(1.0, std::abs(k0));
}

}  // namespace

ClassicalSystem::ClassicalSystem(double mass_in, double omega_in,
                                 double amplitude_in, double drive_omega_in)
    : mass(mass_in),
      omega(omega_in),
      amplitude(amplitude_in),
      drive_omega(drive_omega_in) {
  validate_system(*this);
}

double k_value(const ClassicalSystem& sys, const ClassicalState& s) {
  return k_value_impl(sys, s, -1.0);
}

double k_value_corrupted(const ClassicalSystem& sys, const ClassicalState& s) {
  return k_value_impl(sys, s, +1.0);
}

std::vector<ClassicalState> classical_propagate(const ClassicalSystem& sys,
                                                const ClassicalState& s0,
                                                double t_end, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("classical_propagate: dt must be > 0");
  }
  if (s0.t != 0.0) {
    throw std::invalid_argument("classical_propagate: s0.t must be 0");
  }
  const double w2 = sys.omega * sys.omega;
  const double f_over_m = sys.amplitude / sys.mass;
  const auto accel = [&](double x, double t) {
    return -w2 * x + f_over_m * std::sin(sys.drive_omega * t);
  };

  const auto nsteps = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(t_end / dt)));
  const double h = t_end / static_cast<double>(nsteps);

  std::vector<ClassicalState> traj;
  traj.reserve(nsteps + 1);
  traj.push_back(s0);
  double x = s0.x;
  double v = s0.v;
  for (std::size_t i = 0; i < nsteps; ++i) {
    const double t = static_cast<double>(i) * h;
    const double k1x = v, k1v = accel(x, t);
    const double k2x = v + 0.5 * h * k1v,
                 k2v = accel(x + 0.5 * h * k1x, t + 0.5 * h);
    const double k3x = v + 0.5 * h * k2v,
                 k3v = accel(x + 0.5 * h * k2x, t + 0.5 * h);
    const double k4x = v + h * k3v, k4v = accel(x + h * k3x, t + h);
    x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    traj.push_back(ClassicalState{x, v, static_cast<double>(i + 1) * h});
  }
  return traj;
}

ClassicalState classical_closed_form(const ClassicalSystem& sys,
                                     const ClassicalState& s0, double t) {
  if (s0.t != 0.0) {
    throw std::invalid_argument("classical_closed_form: s0.t must be 0");
  }
  const double w = sys.omega;
  const double W = sys.drive_omega;
  const double amp = (sys.amplitude / sys.mass) / (w * w - W * W);
  // particular solution amp*sin(W t); homogeneous part matches (x0, v0)
  const double b = s0.x;
  const double c = (s0.v - amp * W) / w;
  const double x = amp * std::sin(W * t) + b * std::cos(w * t) +
                   c * std::sin(w * t);
  const double v = amp * W * std::cos(W * t) - b * w * std::sin(w * t) +
                   c * w * std::cos(w * t);
  return ClassicalState{x, v, t};
}

double k_constancy_check(const ClassicalSystem& sys, const ClassicalState& s0,
                         double t_end, double dt) {
  return k_drift(sys, s0, t_end, dt, -1.0);
}

double k_constancy_check_corrupted(const ClassicalSystem& sys,
                                   const ClassicalState& s0, double t_end,
                                   double dt) {
  return k_drift(sys, s0, t_end, dt, +1.0);
}

Complex coherent_alpha(const Generator& gen, double tau) {
  if (!(tau >= 0.0)) {
    throw std::invalid_argument("coherent_alpha: tau must be >= 0");
  }
  if (tau == 0.0) {
    return Complex(0.0, 0.0);
  }
  return Complex(0.0, -1.0) * driven_segment(gen, 0.0, tau);
}

std::vector<Complex> coherent_alpha_series(const Generator& gen,
                                           std::span<const double> taus) {
  std::vector<Complex> out;
  out.reserve(taus.size());
  double prev = 0.0;
  Complex alpha(0.0, 0.0);
  for (double tau : taus) {
    if (tau < prev) {
      throw std::invalid_argument(
          "coherent_alpha_series: taus must be non-decreasing and >= 0");
    }
    if (tau > prev) {
      const double delta = tau - prev;
      alpha = Complex(std::cos(delta), -std::sin(delta)) * alpha +
              Complex(0.0, -1.0) * driven_segment(gen, prev, tau);
      prev = tau;
    }
    out.push_back(alpha);
  }
  return out;
}

Complex coherent_alpha_ode(const Generator& gen, double tau, double dt) {
  if (!(tau >= 0.0)) {
    throw std::invalid_argument("coherent_alpha_ode: tau must be >= 0");
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("coherent_alpha_ode: dt must be > 0");
  }
  if (tau == 0.0) {
    return Complex(0.0, 0.0);
  }
  const auto f = [&](double t, Complex a) {
    return Complex(0.0, -1.0) * (a + std::conj(gen.coupling(t)));
  };
  const auto nsteps = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(tau / dt)));
  const double h = tau / static_cast<double>(nsteps);
  Complex a(0.0, 0.0);
  for (std::size_t i = 0; i < nsteps; ++i) {
    const double t = static_cast<double>(i) * h;
    const Complex k1 = f(t, a);
    const Complex k2 = f(t + 0.5 * h, a + 0.5 * h * k1);
    const Complex k3 = f(t + 0.5 * h, a + 0.5 * h * k2);
    const Complex k4 = f(t + h, a + h * k3);
    a += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return a;
}

std::vector<double> poisson_occupations(Complex alpha, std::size_t nmax) {
  if (nmax < 1) {
    throw std::invalid_argument("poisson_occupations: nmax must be >= 1");
  }
  std::vector<double> p(nmax, 0.0);
  const double mu = std::norm(alpha);
  if (mu == 0.0) {
    p[0] = 1.0;
    return p;
  }
  const double log_mu = std::log(mu);
  for (std::size_t n = 0; n < nmax; ++n) {
    p[n] = std::exp(-mu + static_cast<double>(n) * log_mu -
                    std::lgamma(static_cast<double>(n) + 1.0));
  }
  return p;
}

double coherent_x2(const Params& params, Complex alpha) {
  const double q = 2.0 * alpha.real();
  return 0.5 * params.hbar_bar * (1.0 + q * q);
}

}  // namespace drivenosc
