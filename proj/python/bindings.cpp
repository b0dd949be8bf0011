#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "kerrgauge/campaign.hpp"
#include "kerrgauge/errors.hpp"
#include "kerrgauge/integrator.hpp"
#include "kerrgauge/oracle.hpp"
#include "kerrgauge/selftest.hpp"
#include "kerrgauge/version.hpp"

namespace py = pybind11;
using namespace kerrgauge;

namespace {

py::dict series_columns(const ObservableSeries& s) {
  const auto n = static_cast<py::ssize_t>(s.rows.size());
  py::array_t<double> t(n), mean(n), variance(n), stderr_(n), imag(n), discard(n), spread(n), exact(n);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (py::ssize_t i = 0; i < n; ++i) {
    const auto& r = s.rows[static_cast<std::size_t>(i)];
    t.mutable_at(i) = r.t;
    mean.mutable_at(i) = r.mean;
    variance.mutable_at(i) = r.variance.value_or(nan);
    stderr_.mutable_at(i) = r.standard_error.value_or(nan);
    imag.mutable_at(i) = r.imag_residual;
    discard.mutable_at(i) = r.discard_fraction;
    spread.mutable_at(i) = r.theta_spread.value_or(nan);
    exact.mutable_at(i) = r.oracle.value_or(nan);
  }
  py::dict d;
  d["label"] = s.label;
  d["observable"] = std::string(to_string(s.kind));
  d["t"] = t;
  d["mean"] = mean;
  d["variance"] = variance;
  d["stderr"] = stderr_;
  d["imag_residual"] = imag;
  d["discard_fraction"] = discard;
  d["theta_spread"] = spread;
  d["oracle"] = exact;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gauged hermitian-P simulation of the Kerr oscillator";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<GuardTripped>(m, "GuardTripped", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<CutoffError>(m, "CutoffError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::enum_<ObservableKind>(m, "Observable")
      .value("Y_quadrature", ObservableKind::YQuadrature)
      .value("X_quadrature", ObservableKind::XQuadrature)
      .value("mode_amplitude", ObservableKind::ModeAmplitude)
      .value("number_estimate", ObservableKind::NumberEstimate);

  py::class_<TrajectoryState>(m, "TrajectoryState")
      .def(py::init<cplx, cplx, double>(), py::arg("phi"), py::arg("psi"), py::arg("theta_tilde"))
      .def_readwrite("phi", &TrajectoryState::phi)
      .def_readwrite("psi", &TrajectoryState::psi)
      .def_readwrite("theta_tilde", &TrajectoryState::theta_tilde)
      .def("__repr__", [](const TrajectoryState& s) {
        return "TrajectoryState(phi=" + py::repr(py::cast(s.phi)).cast<std::string>() +
               ", psi=" + py::repr(py::cast(s.psi)).cast<std::string>() +
               ", theta_tilde=" + std::to_string(s.theta_tilde) + ")";
      });

  py::class_<Amplitudes>(m, "Amplitudes")
      .def_readonly("alpha", &Amplitudes::alpha)
      .def_readonly("beta", &Amplitudes::beta)
      .def_readonly("n", &Amplitudes::n)
      .def_readonly("tan_theta", &Amplitudes::tan_theta);

  py::class_<KernelWeight>(m, "KernelWeight")
      .def_readonly("log_magnitude", &KernelWeight::log_magnitude)
      .def_readonly("sign", &KernelWeight::sign)
      .def("trace", &KernelWeight::trace);

  py::class_<GaugeSpec>(m, "Gauge")
      .def_static("positive_p", &GaugeSpec::positive_p)
      .def_static("mu", &GaugeSpec::mu, py::arg("mu"))
      .def_static(
          "custom",
          [](std::string name, py::function rule) {
            return GaugeSpec::custom(std::move(name), [rule](const Amplitudes& a) {
              py::gil_scoped_acquire gil;
              const auto g = rule(a).cast<std::pair<double, double>>();
              return GaugePair{g.first, g.second};
            });
          },
          py::arg("name"), py::arg("rule"), "rule(amplitudes) -> (G, Gbar)")
      .def_static("parse", &GaugeSpec::parse)
      .def("describe", &GaugeSpec::describe)
      .def("__call__", [](const GaugeSpec& g, const Amplitudes& a) {
        const auto p = g(a);
        return std::make_pair(p.g, p.g_bar);
      })
      .def("__repr__", [](const GaugeSpec& g) { return "Gauge(" + g.describe() + ")"; });

  m.def("state_from_amplitudes", &state_from_amplitudes, py::arg("alpha"), py::arg("beta"),
        py::arg("theta_tilde"));
  m.def("map_amplitudes", &map_amplitudes, py::arg("state"), py::arg("guard_cos") = kDefaultGuardCos);
  m.def("invert_amplitude", &invert_amplitude, py::arg("alpha"));
  m.def("kernel_trace", py::overload_cast<const TrajectoryState&>(&kernel_trace), py::arg("state"));
  m.def("trace_ratio", &trace_ratio, py::arg("amplitudes"), py::arg("observable"));
  m.def(
      "estimate",
      [](const Amplitudes& a, ObservableKind kind) {
        const auto e = estimate(a, kind);
        return std::make_pair(e.value, e.imag_residual);
      },
      py::arg("amplitudes"), py::arg("observable"), "(value, imaginary residual)");

  m.def(
      "drift",
      [](const Amplitudes& a, std::pair<double, double> g) {
        const auto d = drift(a, {g.first, g.second});
        return py::make_tuple(d.d_phi, d.d_psi, d.d_theta_tilde);
      },
      py::arg("amplitudes"), py::arg("gauge"), "(dphi/dt, dpsi/dt, dtheta~/dt)");
  m.def("step", &step, py::arg("state"), py::arg("gauge"), py::arg("dt"), py::arg("dw"),
        py::arg("dw_bar"), py::arg("guard_cos") = kDefaultGuardCos);

  m.def("exact_y", &oracle::exact_y, py::arg("alpha0"), py::arg("t"));
  m.def("exact_amplitude", &oracle::exact_amplitude, py::arg("alpha0"), py::arg("t"));
  m.def(
      "fock_ratios",
      [](cplx alpha, cplx beta, double theta, int cutoff) {
        const auto k = oracle::fock_kernel(alpha, beta, theta, cutoff);
        py::dict d;
        for (auto kind : kAllObservables) d[py::str(std::string(to_string(kind)))] = k.ratio(kind);
        d["singular"] = k.singular;
        return d;
      },
      py::arg("alpha"), py::arg("beta"), py::arg("theta"), py::arg("cutoff"),
      "Number-basis Tr[O Lambda] / Tr[Lambda] for every observable.");
  m.def(
      "fock_y",
      [](cplx alpha0, double t, int cutoff) {
        return oracle::fock_evolve(alpha0, t, cutoff).expectation(ObservableKind::YQuadrature).real();
      },
      py::arg("alpha0"), py::arg("t"), py::arg("cutoff"));

  m.def(
      "run",
      [](const std::string& config_text, unsigned threads) {
        CampaignResult r;
        {
          py::gil_scoped_release release;
          r = run_campaign(parse_config(config_text), threads);
        }
        py::list out;
        for (const auto& s : r.series) out.append(series_columns(s));
        return out;
      },
      py::arg("config"), py::arg("threads") = 1,
      "Run a campaign from key = value config text; one dict of numpy columns per observable.");
  m.def(
      "run_csv",
      [](const std::string& config_text, unsigned threads) {
        CampaignResult r;
        {
          py::gil_scoped_release release;
          r = run_campaign(parse_config(config_text), threads);
        }
        std::vector<std::string> out;
        for (const auto& s : r.series) out.push_back(series_to_csv(s));
        return out;
      },
      py::arg("config"), py::arg("threads") = 1, "Same as run, rendered as series CSV text.");
  m.def(
      "sweep",
      [](const std::string& config_text, const std::string& axis, const std::vector<double>& values,
         unsigned threads) {
        SweepResult r;
        {
          py::gil_scoped_release release;
          r = sweep(parse_config(config_text), parse_sweep_axis(axis), values, threads);
        }
        py::list out;
        for (const auto& p : r.points) {
          py::list series;
          for (const auto& s : p.result.series) series.append(series_columns(s));
          py::dict d;
          d["value"] = p.value;
          d["seed"] = p.seed;
          d["series"] = series;
          out.append(d);
        }
        return out;
      },
      py::arg("config"), py::arg("axis"), py::arg("values"), py::arg("threads") = 1);
  m.def(
      "read_series_csv",
      [](const std::filesystem::path& path) { return series_columns(read_series_csv(path)); },
      py::arg("path"));

  m.def("selftest", [] {
    py::list out;
    for (const auto& c : run_selftest()) out.append(py::make_tuple(c.name, c.passed, c.detail));
    return out;
  });
}
