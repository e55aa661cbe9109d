#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "carfollow/harness.hpp"
#include "carfollow/oracles.hpp"
#include "carfollow/phase.hpp"
#include "carfollow/sim.hpp"
#include "carfollow/version.hpp"

namespace py = pybind11;
using namespace carfollow;

namespace {

ModelId model_arg(const std::string& key) {
  const auto id = model_from_key(key);
  if (!id) throw py::value_error("unknown model '" + key + "'");
  return *id;
}

// Column-oriented trajectory view; cheap to hand to numpy/pandas.
py::dict trajectory_columns(const Trajectory& traj) {
  std::vector<double> t, x_f, v_f, a_f, x_l, v_l, z;
  std::vector<std::string> phase;
  t.reserve(traj.steps.size());
  for (const auto& rec : traj.steps) {
    const auto& s = rec.state;
    t.push_back(s.t);
    x_f.push_back(s.follower.x);
    v_f.push_back(s.follower.v);
    a_f.push_back(s.follower.a);
    x_l.push_back(s.leader.x);
    v_l.push_back(s.leader.v);
    z.push_back(s.spacing);
    phase.push_back(std::string(phase_name(rec.phase)));
  }
  py::dict out;
  out["t"] = std::move(t);
  out["x_f"] = std::move(x_f);
  out["v_f"] = std::move(v_f);
  out["a_f"] = std::move(a_f);
  out["x_l"] = std::move(x_l);
  out["v_l"] = std::move(v_l);
  out["z"] = std::move(z);
  out["phase"] = std::move(phase);
  if (traj.failure) {
    out["failure"] = py::dict(py::arg("t") = traj.failure->t,
                              py::arg("kind") = traj.failure->kind,
                              py::arg("message") = traj.failure->message);
  }
  return out;
}

PairState pair_from_scalars(double v, double z, double v_leader,
                            const ModelParams& params) {
  VehicleState follower;
  follower.v = v;
  VehicleState leader;
  leader.x = z;
  leader.v = v_leader;
  return make_pair_state(0.0, follower, leader, params);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "car-following model simulation and verification toolkit";
  m.attr("__version__") = kVersion;
  m.attr("build_id") = kBuildId;

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<DomainError>(m, "DomainError");
  py::register_exception<PreconditionError>(m, "PreconditionError");
  py::register_exception<UnsupportedError>(m, "UnsupportedError");
  py::register_exception<SearchError>(m, "SearchError");

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("zeta", &ModelParams::zeta)
      .def_readwrite("zeta_min", &ModelParams::zeta_min)
      .def_readwrite("tau", &ModelParams::tau)
      .def_readwrite("tau_brake", &ModelParams::tau_brake)
      .def_readwrite("mu", &ModelParams::mu)
      .def_readwrite("alpha", &ModelParams::alpha)
      .def_readwrite("beta", &ModelParams::beta)
      .def_readwrite("delta", &ModelParams::delta)
      .def_readwrite("tau1", &ModelParams::tau1)
      .def_readwrite("alpha_gipps", &ModelParams::alpha_gipps)
      .def("validate", &ModelParams::validate)
      .def("__repr__", [](const ModelParams& p) {
        std::ostringstream os;
        os << "ModelParams(zeta=" << p.zeta << ", zeta_min=" << p.zeta_min
           << ", tau=" << p.tau << ", tau_brake=" << p.tau_brake << ", mu=" << p.mu
           << ", alpha=" << p.alpha << ", beta=" << p.beta << ")";
        return os.str();
      });

  m.def("model_keys", [] {
    std::vector<std::string> keys;
    for (ModelId id : {ModelId::Newell, ModelId::BANewell, ModelId::BDANewell,
                       ModelId::IDM, ModelId::GippsFull, ModelId::GippsSimplified}) {
      keys.emplace_back(model_key(id));
    }
    return keys;
  });

  m.def(
      "equilibrium_speed",
      [](double z, const ModelParams& params) {
        return equilibrium_speed(pair_from_scalars(0.0, z, 0.0, params), params);
      },
      py::arg("z"), py::arg("params") = ModelParams{});

  m.def(
      "model_next",
      [](const std::string& model, double v, double z, double v_leader,
         const ModelParams& params, double eps) {
        const auto out = model_next(model_arg(model),
                                    pair_from_scalars(v, z, v_leader, params),
                                    params, StepSize{eps});
        return py::make_tuple(out.v_next, out.a, std::string(phase_name(out.phase)));
      },
      py::arg("model"), py::arg("v"), py::arg("z"), py::arg("v_leader") = 0.0,
      py::arg("params") = ModelParams{}, py::arg("eps") = 1e-3,
      "Next speed, acceleration, and phase for one state. Returns (v_next, a, "
      "phase).");

  m.def(
      "idm_accel",
      [](double v, double z, double v_leader, const ModelParams& params) {
        return idm_accel(pair_from_scalars(v, z, v_leader, params), params);
      },
      py::arg("v"), py::arg("z"), py::arg("v_leader") = 0.0,
      py::arg("params") = ModelParams{});

  m.def(
      "safe_stopping_distance",
      [](double v, const ModelParams& params) {
        return safe_stopping_distance(v, params);
      },
      py::arg("v"), py::arg("params") = ModelParams{});

  m.def(
      "classify",
      [](const std::string& model, double v, double z, const ModelParams& params,
         double eps) {
        return std::string(phase_name(classify(
            model_arg(model), pair_from_scalars(v, z, 0.0, params), params,
            StepSize{eps})));
      },
      py::arg("model"), py::arg("v"), py::arg("z"),
      py::arg("params") = ModelParams{}, py::arg("eps") = 1e-3);

  m.def("critical_spacing",
        [](const ModelParams& params) { return critical_spacing(params); },
        py::arg("params") = ModelParams{});

  m.def(
      "fundamental_diagram",
      [](const std::string& model, const std::vector<double>& densities,
         const ModelParams& params) {
        std::vector<py::tuple> out;
        for (const auto& p : fundamental_diagram(model_arg(model), params, densities)) {
          out.push_back(py::make_tuple(p.k, p.v, p.q));
        }
        return out;
      },
      py::arg("model"), py::arg("densities"), py::arg("params") = ModelParams{},
      "Analytic steady-state (k, v, q) points.");

  m.def(
      "simulate_slvp",
      [](const std::string& model, double v0, double z0, double t_end, double eps,
         const ModelParams& params, const std::string& clamp) {
        Scenario sc;
        sc.model = model_arg(model);
        sc.params = params;
        sc.eps = StepSize{eps};
        sc.t_end = t_end;
        sc.follower0 = VehicleState{0.0, v0, 0.0};
        sc.leader = LeaderProfile::stationary(z0);
        const auto policy = clamp_policy_from_name(clamp);
        if (!policy) throw py::value_error("unknown clamp policy '" + clamp + "'");
        sc.clamp = *policy;
        return trajectory_columns(run(sc));
      },
      py::arg("model"), py::arg("v0"), py::arg("z0"), py::arg("t_end"),
      py::arg("eps") = 1e-3, py::arg("params") = ModelParams{},
      py::arg("clamp") = "none",
      "Stationary lead-vehicle run; returns column dict (t, x_f, v_f, ...).");

  m.def(
      "idm_linearize",
      [](const ModelParams& params) {
        const auto lin = idm_linearize(params);
        py::dict out;
        out["jacobian"] = lin.jacobian;
        out["eigenvalues"] =
            py::make_tuple(lin.eigenvalues[0], lin.eigenvalues[1]);
        out["classification"] = std::string(equilibrium_class_name(lin.classification));
        return out;
      },
      py::arg("params") = ModelParams{});

  py::class_<GippsBrakingSolution>(m, "GippsBrakingSolution")
      .def(py::init<const ModelParams&, double>(), py::arg("params"), py::arg("v0"))
      .def_property_readonly("v0", &GippsBrakingSolution::v0)
      .def_property_readonly("z0", &GippsBrakingSolution::z0)
      .def("time_of_spacing", &GippsBrakingSolution::time_of_spacing, py::arg("z"))
      .def("speed_of_spacing", &GippsBrakingSolution::speed_of_spacing, py::arg("z"))
      .def("accel_of_spacing", &GippsBrakingSolution::accel_of_spacing, py::arg("z"));

  m.def(
      "min_beta_for_compliance",
      [](double v0, double eps, const ModelParams& params) {
        const auto r = min_beta_for_compliance(params, v0, StepSize{eps});
        return py::make_tuple(r.beta, r.closed_form);
      },
      py::arg("v0"), py::arg("eps") = 1e-3, py::arg("params") = ModelParams{},
      "Bisection threshold and the v0/(2*tau) closed form.");
}
