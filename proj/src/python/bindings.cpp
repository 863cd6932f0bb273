#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "flockwave/characterize.hpp"
#include "flockwave/error.hpp"
#include "flockwave/simulate.hpp"
#include "flockwave/spec_io.hpp"
#include "flockwave/spectrum.hpp"
#include "flockwave/stability.hpp"
#include "flockwave/system.hpp"

namespace py = pybind11;
using namespace flockwave;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::array_t<double> to_matrix(const std::vector<double>& v, std::size_t rows, std::size_t cols) {
  py::array_t<double> a({rows, cols});
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

std::optional<Classification> try_classify(const FlockSpec& s) {
  const auto p = reduce(s.config);
  if (velocity_discriminant(p) < 0.0) return std::nullopt;
  return classify(signal_velocities(p));
}

double default_horizon(const FlockSpec& s) {
  const auto cls = try_classify(s);
  const double N = s.N;
  if (cls && cls->type == SolutionType::TypeI) {
    return N / cls->c_plus + 1.25 * 2.0 * N * (1.0 / cls->c_plus - 1.0 / cls->c_minus);
  }
  if (cls && cls->type == SolutionType::TypeII) return 1.25 * N / cls->c_minus;
  return 10.0 * N;
}

IntegratorOptions options(const FlockSpec& s, std::optional<double> t_max, std::optional<double> dt, double tol) {
  IntegratorOptions o;
  o.t_max = t_max ? *t_max : default_horizon(s);
  if (dt) {
    o.method = IntegratorMethod::RungeKutta4;
    o.dt = *dt;
  }
  o.abs_tol = o.rel_tol = tol;
  return o;
}

py::dict classify_spec(const FlockSpec& s) {
  const auto p = reduce(s.config);
  const auto report = necessary_criteria(p, s.config);
  py::list conditions;
  for (const auto& c : report.conditions) {
    py::dict d;
    d["id"] = c.id;
    d["formula"] = c.formula;
    d["satisfied"] = c.satisfied;
    d["value"] = c.value;
    d["margin"] = c.margin;
    conditions.append(d);
  }
  py::dict out;
  out["conditions"] = conditions;
  out["criteria_pass"] = report.overall;
  out["circle_margin"] = circle_spectral_margin(p);
  if (const auto cls = try_classify(s)) {
    out["type"] = std::string(to_string(cls->type));
    out["c_plus"] = cls->c_plus;
    out["c_minus"] = cls->c_minus;
    out["attenuating"] = cls->attenuating;
  } else {
    out["type"] = py::none();
  }
  return out;
}

py::dict characterize_spec(const FlockSpec& s, std::optional<double> t_max, double tol) {
  const auto v = signal_velocities(reduce(s.config));
  const auto cls = classify(v);
  const auto sig = trace_last_agent(s, options(s, t_max, std::nullopt, tol));
  py::dict out;
  out["type"] = std::string(to_string(cls.type));
  if (cls.type == SolutionType::TypeI) {
    const auto p = predict_type1(v, s.N, s.v0);
    const auto m = measure_type1(sig);
    const auto e = relative_errors(m, p);
    out["predicted"] = py::dict(py::arg("A1") = p.amplitudes[0], py::arg("alpha") = p.attenuation,
                                py::arg("T") = p.period);
    out["measured"] = py::dict(py::arg("A1") = m.amplitudes[0], py::arg("alpha") = m.attenuation,
                               py::arg("T") = m.period);
    out["errors"] = py::dict(py::arg("A1") = e.A1, py::arg("alpha") = e.attenuation, py::arg("T") = e.period);
  } else if (cls.type == SolutionType::TypeII) {
    const auto p = predict_type2(v, s.N, s.v0);
    const auto m = measure_type2(sig, p);
    const auto e = relative_errors(m, p);
    out["predicted"] = py::dict(py::arg("A") = p.amplitude, py::arg("T1") = p.T1, py::arg("T2") = p.T2);
    out["measured"] = py::dict(py::arg("A") = m.amplitude, py::arg("T1") = m.T1, py::arg("T2") = m.T2);
    out["errors"] = py::dict(py::arg("A") = e.A, py::arg("T1") = e.T1, py::arg("T2") = e.T2);
  } else {
    throw Error("characterize", "no closed-form prediction for " + std::string(to_string(cls.type)));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Flock dynamics with next-nearest-neighbour coupling";
  m.attr("__version__") = FLOCKWAVE_VERSION;

  py::register_exception<Error>(m, "FlockwaveError", PyExc_ValueError);

  py::class_<FlockSpec>(m, "FlockSpec")
      .def_readwrite("N", &FlockSpec::N)
      .def_readwrite("delta", &FlockSpec::delta)
      .def_readwrite("v0", &FlockSpec::v0)
      .def_property(
          "boundary", [](const FlockSpec& s) { return std::string(to_string(s.boundary)); },
          [](FlockSpec& s, const std::string& b) { s.boundary = boundary_from_string(b); })
      .def_property_readonly("g_x", [](const FlockSpec& s) { return s.config.g_x(); })
      .def_property_readonly("g_v", [](const FlockSpec& s) { return s.config.g_v(); })
      .def_property_readonly("rho_x", [](const FlockSpec& s) { return s.config.rho_x().values(); })
      .def_property_readonly("rho_v", [](const FlockSpec& s) { return s.config.rho_v().values(); })
      .def("to_json", [](const FlockSpec& s) { return serialize_spec(s); })
      .def("__repr__", [](const FlockSpec& s) {
        return "FlockSpec(N=" + std::to_string(s.N) + ", boundary=" + std::string(to_string(s.boundary)) + ")";
      });

  m.def("parse_spec", [](const std::string& text) { return parse_spec(text); }, py::arg("text"));
  m.def("load_spec", &load_spec, py::arg("path"));

  m.def(
      "validate",
      [](const std::string& text) {
        py::list out;
        for (const auto& v : validate_config(parse_spec_document(text).config).violations) {
          out.append(py::dict(py::arg("field") = v.field, py::arg("constraint") = v.constraint,
                              py::arg("residual") = v.residual, py::arg("exact") = v.exact));
        }
        return out;
      },
      py::arg("text"), "Violations of the coupling constraints; empty when the spec is valid.");

  m.def(
      "signal_velocities",
      [](const FlockSpec& s) {
        const auto v = signal_velocities(reduce(s.config));
        return py::make_tuple(v.c_plus, v.c_minus);
      },
      py::arg("spec"));

  m.def("classify", &classify_spec, py::arg("spec"));

  m.def(
      "eigencurves",
      [](const FlockSpec& s, int samples) {
        const auto c = eigencurves(reduce(s.config), samples);
        py::array_t<double> phi(c.samples.size());
        py::array_t<Complex> nu_plus(c.samples.size()), nu_minus(c.samples.size());
        for (std::size_t i = 0; i < c.samples.size(); ++i) {
          phi.mutable_at(i) = c.samples[i].phi;
          nu_plus.mutable_at(i) = c.samples[i].nu_plus;
          nu_minus.mutable_at(i) = c.samples[i].nu_minus;
        }
        return py::dict(py::arg("phi") = phi, py::arg("nu_plus") = nu_plus, py::arg("nu_minus") = nu_minus,
                        py::arg("margin") = c.spectral_margin);
      },
      py::arg("spec"), py::arg("samples") = kDefaultCurveSamples);

  m.def(
      "line_eigen_stability",
      [](const FlockSpec& s) {
        const auto r = line_eigen_stability(build_system(s));
        py::array_t<Complex> ev(r.eigenvalues.size());
        std::copy(r.eigenvalues.begin(), r.eigenvalues.end(), ev.mutable_data());
        return py::dict(py::arg("eigenvalues") = ev, py::arg("max_real") = r.max_real,
                        py::arg("kernel_count") = r.kernel_count, py::arg("verdict") = std::string(to_string(r.verdict)));
      },
      py::arg("spec"));

  m.def(
      "simulate",
      [](const FlockSpec& s, std::optional<double> t_max, std::optional<double> dt, double tol) {
        Trajectory tr;
        {
          py::gil_scoped_release release;
          tr = integrate(s, options(s, t_max, dt, tol));
        }
        const auto n = static_cast<std::size_t>(tr.N);
        return py::dict(py::arg("t") = to_array(tr.times), py::arg("z") = to_matrix(tr.z, tr.samples(), n),
                        py::arg("zdot") = to_matrix(tr.zdot, tr.samples(), n), py::arg("truncated") = tr.truncated,
                        py::arg("reason") = tr.truncation_reason);
      },
      py::arg("spec"), py::arg("t_max") = py::none(), py::arg("dt") = py::none(), py::arg("tol") = 1e-8,
      "Integrates the flock. Passing dt selects fixed-step RK4; otherwise adaptive Dormand-Prince.");

  m.def("characterize", &characterize_spec, py::arg("spec"), py::arg("t_max") = py::none(), py::arg("tol") = 1e-8,
        "Simulates and compares the measured last-agent descriptors against the closed-form predictions.");
}
