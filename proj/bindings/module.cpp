#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "drivenosc/errors.hpp"
#include "drivenosc/oracle.hpp"
#include "drivenosc/propagate.hpp"
#include "drivenosc/verify.hpp"
#include "drivenosc/version.hpp"

namespace py = pybind11;
using namespace drivenosc;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Driven quantum harmonic oscillator in a truncated Fock basis: "
            "constant-of-motion vs Hamiltonian quantization";
  m.attr("__version__") = kVersion;

  py::register_exception<TruncationOverflowError>(m, "TruncationOverflowError",
                                                  PyExc_RuntimeError);
  py::register_exception<StiffnessError>(m, "StiffnessError",
                                         PyExc_RuntimeError);
  py::register_exception<HermiticityError>(m, "HermiticityError",
                                           PyExc_RuntimeError);

  py::class_<Params>(m, "Params")
      .def(py::init<double, double, double>(), py::arg("epsilon"),
           py::arg("hbar_bar") = 0.4, py::arg("rho") = 6.25)
      .def_readonly("epsilon", &Params::epsilon)
      .def_readonly("hbar_bar", &Params::hbar_bar)
      .def_readonly("rho", &Params::rho)
      .def_readonly("drive_strength", &Params::drive_strength);

  py::class_<FockState>(m, "FockState")
      .def(py::init<std::vector<Complex>, double>(), py::arg("amplitudes"),
           py::arg("tau") = 0.0)
      .def_property_readonly("dim", &FockState::dim)
      .def_property_readonly("tau", &FockState::tau)
      .def_property_readonly("amplitudes",
                             [](const FockState& s) {
                               return std::vector<Complex>(
                                   s.amplitudes().begin(),
                                   s.amplitudes().end());
                             })
      .def("__len__", &FockState::dim)
      .def("__getitem__",
           [](const FockState& s, std::size_t n) {
             if (n >= s.dim()) {
               throw py::index_error();
             }
             return s[n];
           });

  m.def("vacuum_state", &vacuum_state, py::arg("dim"));
  m.def("apply_lowering", &apply_lowering, py::arg("state"));
  m.def(
      "apply_raising",
      [](const FockState& s) {
        RaisingResult r = apply_raising(s);
        return py::make_tuple(std::move(r.state), r.leakage);
      },
      py::arg("state"), "Returns (state, leakage).");
  m.def("norm_squared", &norm_squared, py::arg("state"));
  m.def("x2_expectation", &x2_expectation, py::arg("state"), py::arg("params"));

  py::class_<X2Matrix>(m, "X2Matrix")
      .def_static("build", &X2Matrix::build, py::arg("dim"), py::arg("params"))
      .def_readonly("diag", &X2Matrix::diag)
      .def_readonly("off2", &X2Matrix::off2);

  py::enum_<QuantizationMode>(m, "QuantizationMode")
      .value("ConstantOfMotion", QuantizationMode::ConstantOfMotion)
      .value("Hamiltonian", QuantizationMode::Hamiltonian);
  py::enum_<KCoefficientForm>(m, "KCoefficientForm")
      .value("Reduced", KCoefficientForm::Reduced)
      .value("Raw", KCoefficientForm::Raw);

  py::class_<Generator>(m, "Generator")
      .def_readonly("mode", &Generator::mode)
      .def_readonly("params", &Generator::params)
      .def("diag_shift",
           [](const Generator& g, double tau) { return g.diag_shift(tau); },
           py::arg("tau"))
      .def("coupling",
           [](const Generator& g, double tau) { return g.coupling(tau); },
           py::arg("tau"));

  m.def("build_h_generator", &build_h_generator, py::arg("params"));
  m.def("build_k_generator", &build_k_generator, py::arg("params"),
        py::arg("form") = KCoefficientForm::Reduced);
  m.def("apply_generator", &apply_generator, py::arg("generator"),
        py::arg("state"), py::arg("tau"));
  m.def("dense_generator_matrix", &dense_generator_matrix,
        py::arg("generator"), py::arg("dim"), py::arg("tau"));
  m.def(
      "hermiticity_audit",
      [](const Generator& g, std::size_t dim, const std::vector<double>& taus) {
        return hermiticity_audit(g, dim, taus);
      },
      py::arg("generator"), py::arg("dim"), py::arg("taus"));

  py::enum_<StepMethod>(m, "StepMethod")
      .value("Rk4Fixed", StepMethod::Rk4Fixed)
      .value("Rk45Adaptive", StepMethod::Rk45Adaptive);

  py::class_<StepControl>(m, "StepControl")
      .def(py::init([](StepMethod method, double dt, double rel_tol,
                       double abs_tol, double max_step) {
             return StepControl{method, dt, rel_tol, abs_tol, max_step};
           }),
           py::arg("method") = StepMethod::Rk45Adaptive, py::arg("dt") = 1e-3,
           py::arg("rel_tol") = 1e-10, py::arg("abs_tol") = 1e-14,
           py::arg("max_step") = 1e-2)
      .def_readwrite("method", &StepControl::method)
      .def_readwrite("dt", &StepControl::dt)
      .def_readwrite("rel_tol", &StepControl::rel_tol)
      .def_readwrite("abs_tol", &StepControl::abs_tol)
      .def_readwrite("max_step", &StepControl::max_step);

  py::class_<TruncationPolicy>(m, "TruncationPolicy")
      .def(py::init([](std::size_t initial_dim, double tail_guard,
                       double growth_factor, std::size_t max_dim) {
             return TruncationPolicy{initial_dim, tail_guard, growth_factor,
                                     max_dim};
           }),
           py::arg("initial_dim") = 64, py::arg("tail_guard") = 1e-20,
           py::arg("growth_factor") = 2.0, py::arg("max_dim") = 4096)
      .def_readwrite("initial_dim", &TruncationPolicy::initial_dim)
      .def_readwrite("tail_guard", &TruncationPolicy::tail_guard)
      .def_readwrite("growth_factor", &TruncationPolicy::growth_factor)
      .def_readwrite("max_dim", &TruncationPolicy::max_dim);

  py::class_<RunMeta>(m, "RunMeta")
      .def_readonly("params", &RunMeta::params)
      .def_readonly("mode", &RunMeta::mode)
      .def_readonly("control", &RunMeta::control)
      .def_readonly("policy", &RunMeta::policy)
      .def_readonly("tau_end", &RunMeta::tau_end)
      .def_readonly("sample_every", &RunMeta::sample_every);

  py::class_<PropagationStats>(m, "PropagationStats")
      .def_readonly("steps_accepted", &PropagationStats::steps_accepted)
      .def_readonly("steps_rejected", &PropagationStats::steps_rejected)
      .def_readonly("growth_events", &PropagationStats::growth_events)
      .def_readonly("max_dim_reached", &PropagationStats::max_dim_reached)
      .def_readonly("max_tail_mass", &PropagationStats::max_tail_mass)
      .def_readonly("max_norm_drift", &PropagationStats::max_norm_drift)
      .def_readonly("final_norm_drift", &PropagationStats::final_norm_drift)
      .def_readonly("off_normal_samples",
                    &PropagationStats::off_normal_samples);

  py::class_<TimeSeries>(m, "TimeSeries")
      .def_readonly("meta", &TimeSeries::meta)
      .def_readonly("stats", &TimeSeries::stats)
      .def_readonly("taus", &TimeSeries::taus)
      .def_readonly("states", &TimeSeries::states)
      .def_readonly("probs", &TimeSeries::probs)
      .def_readonly("norm2", &TimeSeries::norm2)
      .def_readonly("x2", &TimeSeries::x2)
      .def("__len__", &TimeSeries::size)
      .def("prob", &TimeSeries::prob, py::arg("sample"), py::arg("level"))
      .def("max_level_above", &TimeSeries::max_level_above, py::arg("floor"));

  m.def("rk4_step", &rk4_step, py::arg("generator"), py::arg("state"),
        py::arg("tau"), py::arg("dt"));
  m.def(
      "rk45_step",
      [](const Generator& gen, const FockState& state, double tau, double dt,
         const StepControl& ctrl) {
        StepResult r = rk45_step(gen, state, tau, dt, ctrl);
        return py::make_tuple(std::move(r.state), r.accepted, r.dt_next);
      },
      py::arg("generator"), py::arg("state"), py::arg("tau"), py::arg("dt"),
      py::arg("control"), "Returns (state, accepted, dt_next).");
  m.def("propagate", &propagate, py::arg("generator"), py::arg("init"),
        py::arg("tau_end"), py::arg("control") = StepControl{},
        py::arg("policy") = TruncationPolicy{}, py::arg("sample_every") = 0.01,
        py::call_guard<py::gil_scoped_release>());

  m.def("level_probabilities", &level_probabilities, py::arg("state"));

  py::class_<CensusResult>(m, "CensusResult")
      .def_readonly("epsilon", &CensusResult::epsilon)
      .def_readonly("mode", &CensusResult::mode)
      .def_readonly("max_involved", &CensusResult::max_involved)
      .def_readonly("threshold", &CensusResult::threshold);
  m.def("excited_census", &excited_census, py::arg("series"),
        py::arg("threshold") = 1e-4);

  m.def(
      "x2_series",
      [](const std::vector<FockState>& states, const Params& params) {
        return x2_series(states, params);
      },
      py::arg("states"), py::arg("params"));

  py::class_<PeakSummary>(m, "PeakSummary")
      .def_readonly("value", &PeakSummary::value)
      .def_readonly("tau", &PeakSummary::tau);
  m.def("peak_summary", &peak_summary, py::arg("series"), py::arg("level"));

  py::class_<ClassicalSystem>(m, "ClassicalSystem")
      .def(py::init<double, double, double, double>(), py::arg("mass"),
           py::arg("omega"), py::arg("amplitude"), py::arg("drive_omega"))
      .def_readonly("mass", &ClassicalSystem::mass)
      .def_readonly("omega", &ClassicalSystem::omega)
      .def_readonly("amplitude", &ClassicalSystem::amplitude)
      .def_readonly("drive_omega", &ClassicalSystem::drive_omega);

  py::class_<ClassicalState>(m, "ClassicalState")
      .def(py::init([](double x, double v, double t) {
             return ClassicalState{x, v, t};
           }),
           py::arg("x"), py::arg("v"), py::arg("t") = 0.0)
      .def_readwrite("x", &ClassicalState::x)
      .def_readwrite("v", &ClassicalState::v)
      .def_readwrite("t", &ClassicalState::t);

  m.def("k_value", &k_value, py::arg("system"), py::arg("state"));
  m.def("k_value_corrupted", &k_value_corrupted, py::arg("system"),
        py::arg("state"));
  m.def("classical_propagate", &classical_propagate, py::arg("system"),
        py::arg("s0"), py::arg("t_end"), py::arg("dt"));
  m.def("classical_closed_form", &classical_closed_form, py::arg("system"),
        py::arg("s0"), py::arg("t"));
  m.def("k_constancy_check", &k_constancy_check, py::arg("system"),
        py::arg("s0"), py::arg("t_end"), py::arg("dt"));
  m.def("k_constancy_check_corrupted", &k_constancy_check_corrupted,
        py::arg("system"), py::arg("s0"), py::arg("t_end"), py::arg("dt"));

  m.def("coherent_alpha", &coherent_alpha, py::arg("generator"),
        py::arg("tau"));
  m.def(
      "coherent_alpha_series",
      [](const Generator& gen, const std::vector<double>& taus) {
        return coherent_alpha_series(gen, taus);
      },
      py::arg("generator"), py::arg("taus"));
  m.def("coherent_alpha_ode", &coherent_alpha_ode, py::arg("generator"),
        py::arg("tau"), py::arg("dt") = 1e-4);

  py::class_<CoherentSolution>(m, "CoherentSolution")
      .def(py::init<Generator>(), py::arg("generator"))
      .def_readonly("gen", &CoherentSolution::gen)
      .def("alpha", &CoherentSolution::alpha, py::arg("tau"));

  m.def("poisson_occupations", &poisson_occupations, py::arg("alpha"),
        py::arg("nmax"));
  m.def("coherent_x2", &coherent_x2, py::arg("params"), py::arg("alpha"));

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("name", &CheckResult::name)
      .def_readonly("measured", &CheckResult::measured)
      .def_readonly("bound", &CheckResult::bound)
      .def_readonly("lower_is_pass", &CheckResult::lower_is_pass)
      .def_readonly("pass_", &CheckResult::pass)
      .def_readonly("detail", &CheckResult::detail);

  m.def(
      "run_verification",
      [](bool quick, double coupling_scale) {
        VerifyOptions opts;
        opts.quick = quick;
        opts.coupling_scale = coupling_scale;
        return run_verification(opts);
      },
      py::arg("quick") = false, py::arg("coupling_scale") = 1.0,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "standard_run",
      [](QuantizationMode mode, double epsilon, double tau_end,
         const StepControl& ctrl, const TruncationPolicy& policy,
         double sample_every, double coupling_scale) {
        return standard_run(mode, epsilon, tau_end, ctrl, policy, sample_every,
                            coupling_scale);
      },
      py::arg("mode"), py::arg("epsilon"), py::arg("tau_end") = 20.0,
      py::arg("control") = StepControl{},
      py::arg("policy") = TruncationPolicy{}, py::arg("sample_every") = 0.01,
      py::arg("coupling_scale") = 1.0,
      py::call_guard<py::gil_scoped_release>());
  m.def("displacement_deviation", &displacement_deviation, py::arg("series"));
  m.def("coherent_x2_deviation", &coherent_x2_deviation, py::arg("series"));
}
