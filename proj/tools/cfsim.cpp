// cfsim: car-following simulation and verification CLI.
//
// Exit codes: 0 success, 1 configuration error, 2 model-domain failure,
// 3 assertion failure (replicate/oracle-check findings).

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "carfollow/config.hpp"
#include "carfollow/harness.hpp"
#include "carfollow/io.hpp"
#include "carfollow/oracles.hpp"
#include "carfollow/reports.hpp"
#include "carfollow/version.hpp"

namespace {

using carfollow::AxisSpec;
using carfollow::ModelId;
using carfollow::StepSize;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDomain = 2;
constexpr int kExitAssertion = 3;

ModelId parse_model(const std::string& key) {
  const auto id = carfollow::model_from_key(key);
  if (!id) throw carfollow::ConfigError("unknown model '" + key + "'");
  return *id;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw carfollow::ConfigError("cannot open output file: " + path);
  return file;
}

std::string legend_path(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  const std::string stem = p.stem().string();
  p.replace_filename(stem + "_legend.json");
  return p.string();
}

struct SimulateArgs {
  std::string model;
  std::string config;
  double dt = 0.0;
  double t_end = 0.0;
  std::string out;
};

int cmd_simulate(const SimulateArgs& args) {
  auto sc = carfollow::scenario_from_json(carfollow::load_json_file(args.config));
  if (!args.model.empty()) sc.model = parse_model(args.model);
  if (args.dt > 0.0) sc.eps = StepSize{args.dt};
  if (args.t_end > 0.0) sc.t_end = args.t_end;
  sc.validate();

  const auto traj = carfollow::run(sc);
  std::ofstream file;
  carfollow::write_trajectory_csv(open_out(file, args.out), traj);
  if (traj.truncated()) {
    std::cerr << "model-domain failure at t=" << traj.failure->t << ": "
              << traj.failure->message << " (trajectory truncated)\n";
    return kExitDomain;
  }
  return kExitOk;
}

struct GridArgs {
  std::string model;
  double v_min = 0.0, v_max = 40.0;
  int v_count = 201;
  double z_min = 0.0, z_max = 120.0;
  int z_count = 241;
  double dt = 1e-3;
  std::string out;
};

int cmd_phase_map(const GridArgs& args) {
  const ModelId id = parse_model(args.model);
  if (id == ModelId::IDM) {
    throw carfollow::UnsupportedError(
        "the IDM has no phase partition; use vector-field instead");
  }
  carfollow::ModelParams params;
  const auto field =
      carfollow::vector_field(id, params, {args.v_min, args.v_max, args.v_count},
                              {args.z_min, args.z_max, args.z_count}, StepSize{args.dt});
  std::ofstream file;
  carfollow::write_phase_map_csv(open_out(file, args.out), field);
  if (!args.out.empty() && args.out != "-") {
    std::ofstream legend(legend_path(args.out));
    legend << carfollow::phase_legend_json().dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_vector_field(const GridArgs& args) {
  const ModelId id = parse_model(args.model);
  carfollow::ModelParams params;
  const auto field =
      carfollow::vector_field(id, params, {args.v_min, args.v_max, args.v_count},
                              {args.z_min, args.z_max, args.z_count}, StepSize{args.dt});
  std::ofstream file;
  carfollow::write_vector_field_csv(open_out(file, args.out), field);
  return kExitOk;
}

struct FdArgs {
  std::string model;
  double k_min = 0.0;
  double k_max = 0.0;
  int count = 20;
  bool simulate = false;
  double dt = 1e-3;
  std::string out;
};

int cmd_fd(const FdArgs& args) {
  const ModelId id = parse_model(args.model);
  carfollow::ModelParams params;
  const double kappa = 1.0 / params.zeta;
  const double lo = args.k_min > 0.0 ? args.k_min : kappa / args.count;
  const double hi = args.k_max > 0.0 ? args.k_max : kappa;
  const auto densities = AxisSpec{lo, hi, args.count}.values();

  const auto points = args.simulate
                          ? [&] {
                              std::vector<carfollow::FDPoint> out;
                              out.reserve(densities.size());
                              for (double k : densities) {
                                out.push_back(carfollow::fd_from_simulation(
                                    id, params, k, StepSize{args.dt}));
                              }
                              return out;
                            }()
                          : carfollow::fundamental_diagram(id, params, densities);
  std::ofstream file;
  carfollow::write_fd_csv(open_out(file, args.out), points);
  return kExitOk;
}

struct ReplicateArgs {
  std::string name;
  std::string out_dir;
  bool no_timestamp = false;
};

int cmd_replicate(const ReplicateArgs& args) {
  const auto bundle = carfollow::replicate(args.name);
  carfollow::write_bundle(bundle, args.out_dir, !args.no_timestamp);
  for (const auto& f : bundle.findings) {
    std::cout << (f.passed ? "pass" : "FAIL") << (f.asserted ? "  " : "i ")
              << f.name << ": observed " << carfollow::format_g9(f.observed)
              << ", expected " << f.expected << '\n';
  }
  return bundle.all_asserted_passed() ? kExitOk : kExitAssertion;
}

struct SweepArgs {
  std::string config;
  std::string out;
  int jobs = 0;
};

int cmd_sweep(const SweepArgs& args) {
  auto spec = carfollow::sweep_spec_from_json(carfollow::load_json_file(args.config));
  if (args.jobs > 0) spec.jobs = args.jobs;
  const auto report = carfollow::sweep(spec);
  std::ofstream file;
  open_out(file, args.out) << carfollow::sweep_report_to_json(report).dump(2) << '\n';
  return kExitOk;
}

struct OracleArgs {
  std::string target;
  double v0 = 30.0;
  double eps = 1e-4;
  std::string out;
};

ordered_json gipps_oracle_table(const OracleArgs& args, bool& passed) {
  carfollow::ModelParams params;
  const carfollow::GippsBrakingSolution oracle(params, args.v0);

  auto braking_run = [&](double eps) {
    carfollow::Scenario sc;
    sc.model = ModelId::GippsSimplified;
    sc.params = params;
    sc.eps = StepSize{eps};
    sc.t_end = 40.0;
    sc.follower0 = carfollow::VehicleState{0.0, args.v0, 0.0};
    sc.leader = carfollow::LeaderProfile::stationary(oracle.z0());
    return carfollow::run(sc);
  };

  auto sup_error = [&](const carfollow::Trajectory& traj) {
    double sup = 0.0;
    for (const auto& rec : traj.steps) {
      const double z = rec.state.spacing;
      if (z < params.zeta) continue;
      sup = std::max(sup, std::abs(rec.state.follower.v - oracle.speed_of_spacing(z)));
    }
    return sup;
  };

  const auto traj = braking_run(args.eps);
  ordered_json table = ordered_json::array();
  const std::size_t samples = 10;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto& rec = traj.steps[traj.steps.size() / samples * i];
    const double z = rec.state.spacing;
    if (z < params.zeta) continue;
    const double sim = rec.state.follower.v;
    const double closed = oracle.speed_of_spacing(z);
    table.push_back(ordered_json{
        {"quantity", "v(z=" + carfollow::format_g9(z) + ")"},
        {"simulated", sim},
        {"closed_form", closed},
        {"abs_error", std::abs(sim - closed)},
        {"rel_error", closed != 0.0 ? std::abs(sim - closed) / std::abs(closed) : 0.0}});
  }

  const double sup = sup_error(traj);
  const double tolerance = 1e-3 * (args.eps / 1e-4);

  ordered_json convergence;
  {
    std::vector<double> eps_list{8e-4, 4e-4, 2e-4, 1e-4};
    std::vector<double> sups;
    for (double e : eps_list) sups.push_back(sup_error(braking_run(e)));
    std::vector<double> ratios;
    for (std::size_t i = 1; i < sups.size(); ++i) ratios.push_back(sups[i] / sups[i - 1]);
    convergence = ordered_json{{"eps", eps_list}, {"sup_error", sups}, {"ratios", ratios}};
  }

  passed = sup <= tolerance;
  return ordered_json{{"meta", ordered_json{{"kind", "oracle-check"},
                                            {"target", "gipps"},
                                            {"v0", args.v0},
                                            {"z0", oracle.z0()},
                                            {"eps", args.eps},
                                            {"build", carfollow::kBuildId}}},
                      {"table", table},
                      {"supnorm", sup},
                      {"tolerance", tolerance},
                      {"convergence", convergence},
                      {"passed", passed}};
}

ordered_json idm_oracle_table(bool& passed) {
  carfollow::ModelParams params;
  const auto lin = carfollow::idm_linearize(params);

  // Residual of the characteristic polynomial at each eigenvalue.
  const double tr = lin.jacobian[0][0] + lin.jacobian[1][1];
  const double det = lin.jacobian[0][0] * lin.jacobian[1][1] -
                     lin.jacobian[0][1] * lin.jacobian[1][0];
  double charpoly_residual = 0.0;
  for (const auto& ev : lin.eigenvalues) {
    charpoly_residual = std::max(charpoly_residual, std::abs(ev * ev - tr * ev + det));
  }

  // Quadratic-order check of the linearization: the remainder of the full
  // right side shrinks ~4x when the radius halves.
  auto max_residual = [&](double r) {
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double angle = 2.0 * M_PI * i / 64.0;
      const double v = r * std::cos(angle);
      const double zt = r * std::sin(angle);
      const auto full = carfollow::idm_slvp_rhs(params, v, zt);
      const auto linear = carfollow::idm_linear_rhs(params, v, zt);
      worst = std::max(worst, std::abs(full[0] - linear[0]));
    }
    return worst;
  };
  const double res_r = max_residual(0.01);
  const double res_half = max_residual(0.005);

  passed = charpoly_residual < 1e-10;
  ordered_json result = carfollow::linearization_to_json(lin);
  result["charpoly_residual"] = charpoly_residual;
  result["taylor_remainder"] =
      ordered_json{{"r", 0.01}, {"residual", res_r}, {"residual_half_r", res_half},
                   {"ratio", res_half / res_r}};
  result["passed"] = passed;
  return ordered_json{{"meta", ordered_json{{"kind", "oracle-check"},
                                            {"target", "idm"},
                                            {"build", carfollow::kBuildId}}},
                      {"result", result}};
}

int cmd_oracle_check(const OracleArgs& args) {
  bool passed = false;
  ordered_json doc;
  if (args.target == "gipps") {
    doc = gipps_oracle_table(args, passed);
  } else if (args.target == "idm") {
    doc = idm_oracle_table(passed);
  } else {
    throw carfollow::ConfigError("oracle-check target must be 'gipps' or 'idm'");
  }
  std::ofstream file;
  open_out(file, args.out) << doc.dump(2) << '\n';
  return passed ? kExitOk : kExitAssertion;
}

void add_grid_options(CLI::App* cmd, GridArgs& args) {
  cmd->add_option("--model", args.model, "model key")->required();
  cmd->add_option("--v-min", args.v_min, "speed axis start [m/s]");
  cmd->add_option("--v-max", args.v_max, "speed axis end [m/s]");
  cmd->add_option("--v-count", args.v_count, "speed axis points");
  cmd->add_option("--z-min", args.z_min, "spacing axis start [m]");
  cmd->add_option("--z-max", args.z_max, "spacing axis end [m]");
  cmd->add_option("--z-count", args.z_count, "spacing axis points");
  cmd->add_option("--dt", args.dt, "step size for discrete branches [s]");
  cmd->add_option("--out", args.out, "output CSV ('-' for stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"car-following model simulation and verification toolkit"};
  app.set_version_flag("--version", std::string("cfsim ") + carfollow::kVersion +
                                        " (" + carfollow::kBuildId + ")");
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 ok, 1 config error, 2 model-domain failure, 3 assertion "
      "failure.");

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "run one scenario, write trajectory CSV");
  sim->add_option("--model", sim_args.model, "override the config's model");
  sim->add_option("--config", sim_args.config, "scenario JSON")->required();
  sim->add_option("--dt", sim_args.dt, "override step size [s]");
  sim->add_option("--t-end", sim_args.t_end, "override end time [s]");
  sim->add_option("--out", sim_args.out, "output CSV ('-' for stdout)")->required();

  GridArgs map_args;
  auto* pmap = app.add_subcommand("phase-map", "phase labels over a (v,z) grid");
  add_grid_options(pmap, map_args);

  GridArgs field_args;
  auto* vfield =
      app.add_subcommand("vector-field", "SLVP (dv/dt, dz/dt) over a (v,z) grid");
  add_grid_options(vfield, field_args);

  FdArgs fd_args;
  auto* fd = app.add_subcommand("fd", "steady-state fundamental diagram");
  fd->add_option("--model", fd_args.model, "model key")->required();
  fd->add_option("--k-min", fd_args.k_min, "lowest density [1/m]");
  fd->add_option("--k-max", fd_args.k_max, "highest density [1/m]");
  fd->add_option("--count", fd_args.count, "number of densities");
  fd->add_flag("--simulate", fd_args.simulate, "measure from simulation instead");
  fd->add_option("--dt", fd_args.dt, "step size for --simulate [s]");
  fd->add_option("--out", fd_args.out, "output CSV ('-' for stdout)");

  ReplicateArgs rep_args;
  auto* rep = app.add_subcommand("replicate", "run a named replication experiment");
  rep->add_option("name", rep_args.name, "one of: ba-newell-slvp, bda-newell-collision, idm-fig2, gipps-fig2")
      ->required();
  rep->add_option("--out-dir", rep_args.out_dir, "bundle output directory")->required();
  rep->add_flag("--no-timestamp", rep_args.no_timestamp,
                "omit the timestamp from findings.json");

  SweepArgs sweep_args;
  auto* sw = app.add_subcommand("sweep", "principle-compliance sweep over a grid");
  sw->add_option("--config", sweep_args.config, "sweep spec JSON")->required();
  sw->add_option("--out", sweep_args.out, "report JSON ('-' for stdout)");
  sw->add_option("--jobs", sweep_args.jobs, "parallel cell evaluation");

  OracleArgs oracle_args;
  auto* oc = app.add_subcommand("oracle-check",
                                "closed-form vs simulation error tables");
  oc->add_option("target", oracle_args.target, "'gipps' or 'idm'")->required();
  oc->add_option("--v0", oracle_args.v0, "initial speed for gipps [m/s]");
  oc->add_option("--eps", oracle_args.eps, "step size for gipps [s]");
  oc->add_option("--out", oracle_args.out, "output JSON ('-' for stdout)");

  try {
    app.parse(argc, argv);
    if (sim->parsed()) return cmd_simulate(sim_args);
    if (pmap->parsed()) return cmd_phase_map(map_args);
    if (vfield->parsed()) return cmd_vector_field(field_args);
    if (fd->parsed()) return cmd_fd(fd_args);
    if (rep->parsed()) return cmd_replicate(rep_args);
    if (sw->parsed()) return cmd_sweep(sweep_args);
    if (oc->parsed()) return cmd_oracle_check(oracle_args);
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const carfollow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const carfollow::PreconditionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const carfollow::UnsupportedError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const carfollow::DomainError& e) {
    std::cerr << "model-domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const carfollow::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
