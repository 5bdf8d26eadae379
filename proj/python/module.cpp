#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "diraclab/harness.hpp"
#include "diraclab/integrate.hpp"
#include "diraclab/model.hpp"
#include "diraclab/pde.hpp"
#include "diraclab/planar.hpp"
#include "diraclab/profile_ode.hpp"
#include "diraclab/scan.hpp"

namespace py = pybind11;
using namespace diraclab;

namespace {

const char* termination_name(TerminationKind kind) {
  switch (kind) {
    case TerminationKind::ReachedEndpoint: return "reached_endpoint";
    case TerminationKind::InteriorBlowup: return "interior_blowup";
    case TerminationKind::StepFailure: return "step_failure";
  }
  return "unknown";
}

IntegrateOptions make_options(double rel_tol, double abs_tol, double blowup_norm,
                              bool dense_output) {
  IntegrateOptions o;
  o.rel_tol = rel_tol;
  o.abs_tol = abs_tol;
  o.blowup_norm = blowup_norm;
  o.dense_output = dense_output;
  return o;
}

}  // namespace

PYBIND11_MODULE(_diraclab, m) {
  m.doc() = "self-similar blowup profiles of a cubic-type Dirac system";

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init(&ModelParams::make), py::arg("k"), py::arg("ell"))
      .def_readonly("k", &ModelParams::k)
      .def_readonly("ell", &ModelParams::ell)
      .def_readonly("p", &ModelParams::p)
      .def_property_readonly("sigma", &ModelParams::sigma)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(k=" + std::to_string(p.k) + ", ell=" + std::to_string(p.ell) + ")";
      });

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("t", &Trajectory::t)
      .def_readonly("state", &Trajectory::state)
      .def_property_readonly("termination",
                             [](const Trajectory& tr) {
                               return std::string(termination_name(tr.termination.kind));
                             })
      .def_property_readonly("termination_at",
                             [](const Trajectory& tr) { return tr.termination.at; })
      .def("__len__", &Trajectory::size);

  // nonlinear potential and coefficient functions
  m.def("eval_w",
        [](const ModelParams& p, Complex u1, Complex u2) { return eval_W(p, {u1, u2}); },
        py::arg("params"), py::arg("u1"), py::arg("u2"));
  m.def("eval_fg",
        [](const ModelParams& p, Complex u, Complex v) {
          const FG fg = eval_fg_cartesian(p, u, v);
          return std::make_pair(fg.F, fg.G);
        },
        py::arg("params"), py::arg("u"), py::arg("v"));

  // planar reduction (k = ell = 1)
  m.def("tau_of_y", &tau_of_y, py::arg("y"));
  m.def("y_of_tau", &y_of_tau, py::arg("tau"));
  m.def("energy", &energy, py::arg("xi"), py::arg("eta"));
  m.def("sigma_flow", &sigma_flow, py::arg("xi0"), py::arg("sign"), py::arg("tau"));
  m.def("sigma_escape_time", &sigma_escape_time, py::arg("xi0"));
  m.def("blowup_location", &bounded_profile_blowup_location, py::arg("xi0"));
  m.def("bounded_profile",
        [](double xi0, double y) {
          const BoundedProfilePoint pt = bounded_profile(xi0, y);
          return std::make_tuple(pt.amp_U, pt.amp_V, pt.delta);
        },
        py::arg("xi0"), py::arg("y"),
        "amplitudes and phase difference of the profile bounded toward y = 1");

  m.def("integrate_planar",
        [](double xi0, double eta0, double tau_max, double rel_tol, double abs_tol,
           double blowup_norm) {
          IntegrateOptions o = make_options(rel_tol, abs_tol, blowup_norm, false);
          o.post_step = clamp_eta;
          return integrate_adaptive(planar_field(), {xi0, eta0}, 0.0, tau_max, o);
        },
        py::arg("xi0"), py::arg("eta0"), py::arg("tau_max") = 10.0,
        py::arg("rel_tol") = 1e-10, py::arg("abs_tol") = 1e-12,
        py::arg("blowup_norm") = 1e8);

  m.def("integrate_polar",
        [](const ModelParams& params, double amp_u, double amp_v, double delta,
           int direction, double endpoint_offset, double rel_tol, double abs_tol) {
          IntegrateOptions o = make_options(rel_tol, abs_tol, 1e8, false);
          return integrate_polar_ic(params, {amp_u, amp_v, delta}, direction,
                                    endpoint_offset, o);
        },
        py::arg("params"), py::arg("amp_u"), py::arg("amp_v"), py::arg("delta"),
        py::arg("direction") = 1, py::arg("endpoint_offset") = 1e-3,
        py::arg("rel_tol") = 1e-10, py::arg("abs_tol") = 1e-12);

  m.def("scan_boundedness",
        [](const ModelParams& params, int jobs) {
          ScanConfig cfg{params, default_ic_grid(), 1e-3, 1e-3, {}};
          const ScanReport rep = scan_boundedness(cfg, jobs);
          py::dict out;
          out["bounded_candidates"] = rep.bounded_candidates;
          out["boundary_deficits"] = rep.boundary_deficits;
          out["interior_blowups"] = rep.interior_blowups;
          out["trivial"] = rep.trivial;
          py::list verdicts;
          for (const ScanEntry& e : rep.entries)
            verdicts.append(std::string(verdict_name(e.verdict.kind)));
          out["verdicts"] = verdicts;
          return out;
        },
        py::arg("params"), py::arg("jobs") = 1,
        "sweep the default initial-state grid and classify boundedness");

  // Cauchy evolution
  py::class_<CauchyField>(m, "CauchyField")
      .def_readonly("t", &CauchyField::t)
      .def_readonly("x0", &CauchyField::x0)
      .def_readonly("dx", &CauchyField::dx)
      .def_readonly("u1", &CauchyField::u1)
      .def_readonly("u2", &CauchyField::u2)
      .def("__len__", &CauchyField::size)
      .def("x", &CauchyField::x, py::arg("i"));

  m.def("make_field",
        [](double x0, double dx, const std::vector<Complex>& u1,
           const std::vector<Complex>& u2) {
          if (u1.size() != u2.size())
            throw std::invalid_argument("u1 and u2 must have the same length");
          CauchyField f;
          f.x0 = x0;
          f.dx = dx;
          f.u1 = u1;
          f.u2 = u2;
          return f;
        },
        py::arg("x0"), py::arg("dx"), py::arg("u1"), py::arg("u2"));
  m.def("step",
        [](CauchyField& field, const ModelParams& params, double blowup_norm) {
          return step(field, params, blowup_norm) == StepStatus::Ok;
        },
        py::arg("field"), py::arg("params"), py::arg("blowup_norm") = 1e8,
        "advance one splitting step of size dx; returns False on overflow");
  m.def("charge", &charge, py::arg("field"));
  m.def("seed_self_similar",
        [](const ModelParams& params, const std::function<Complex(double)>& profile_u,
           const std::function<Complex(double)>& profile_v, double t0, double x0,
           double dx, std::size_t n) {
          return seed_self_similar(
              params, [&](double y) { return SpinorPair{profile_u(y), profile_v(y)}; }, t0,
              x0, dx, n);
        },
        py::arg("params"), py::arg("profile_u"), py::arg("profile_v"), py::arg("t0"),
        py::arg("x0"), py::arg("dx"), py::arg("n"));
  m.def("compare_with_ansatz",
        [](const CauchyField& field, const ModelParams& params,
           const std::function<Complex(double)>& profile_u,
           const std::function<Complex(double)>& profile_v) {
          return compare_with_ansatz(
              field, params, [&](double y) { return SpinorPair{profile_u(y), profile_v(y)}; });
        },
        py::arg("field"), py::arg("params"), py::arg("profile_u"), py::arg("profile_v"));

  // fitting and the experiment harness
  m.def("fit_power_law",
        [](const std::vector<std::pair<double, double>>& samples, double y_lo, double y_hi) {
          const PowerLawFit fit = fit_power_law(samples, y_lo, y_hi);
          return std::make_tuple(fit.slope, fit.intercept, fit.r_squared);
        },
        py::arg("samples"), py::arg("y_lo"), py::arg("y_hi"),
        "least-squares exponent of value ~ (1-y)^slope; returns (slope, intercept, r^2)");
  m.def("run_experiment",
        [](const std::string& config_text, const std::string& out_dir) {
          ExperimentConfig cfg = parse_config(config_text);
          if (!out_dir.empty()) cfg.out_dir = out_dir;
          const RunResult r = run_experiment(cfg);
          py::dict out;
          out["pass"] = r.pass;
          out["files"] = r.files;
          out["checks"] = r.checks;
          out["summary"] = r.summary;
          return out;
        },
        py::arg("config_text"), py::arg("out_dir") = std::string(),
        "parse a key=value config, run it, and report the outcome");
}
