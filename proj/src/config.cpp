#include "carfollow/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace carfollow {

namespace {

using nlohmann::json;

struct UnitDef {
  Dimension dim;
  double to_si;
};

const std::map<std::string, UnitDef>& unit_table() {
  static const std::map<std::string, UnitDef> table{
      {"m", {Dimension::Length, 1.0}},
      {"km", {Dimension::Length, 1000.0}},
      {"s", {Dimension::Time, 1.0}},
      {"ms", {Dimension::Time, 1e-3}},
      {"m/s", {Dimension::Speed, 1.0}},
      {"km/h", {Dimension::Speed, 1.0 / 3.6}},
      {"m/s^2", {Dimension::Acceleration, 1.0}},
      {"1", {Dimension::Dimensionless, 1.0}},
      {"", {Dimension::Dimensionless, 1.0}},
  };
  return table;
}

double convert(double value, const std::string& unit, Dimension dim,
               const std::string& field) {
  auto it = unit_table().find(unit);
  if (it == unit_table().end()) {
    throw ConfigError(field + ": unknown unit '" + unit + "'");
  }
  if (it->second.dim != dim) {
    throw ConfigError(field + ": unit '" + unit + "' has the wrong dimension");
  }
  return value * it->second.to_si;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

}  // namespace

double parse_quantity(const json& j, Dimension dim, const std::string& field) {
  if (j.is_number()) {
    if (dim != Dimension::Dimensionless) {
      throw ConfigError(field + ": dimensioned quantities need an explicit unit");
    }
    return j.get<double>();
  }
  if (j.is_string()) {
    // "120 km/h" form
    std::istringstream is(j.get<std::string>());
    double value = 0.0;
    std::string unit;
    if (!(is >> value)) throw ConfigError(field + ": malformed quantity string");
    is >> unit;
    return convert(value, unit, dim, field);
  }
  if (j.is_object()) {
    reject_unknown_keys(j, {"value", "unit"}, field);
    if (!j.contains("value") || !j["value"].is_number()) {
      throw ConfigError(field + ": quantity object needs a numeric 'value'");
    }
    const std::string unit = j.value("unit", std::string{});
    return convert(j["value"].get<double>(), unit, dim, field);
  }
  throw ConfigError(field + ": expected a quantity");
}

ModelParams params_from_json(const json& j) {
  ModelParams params;
  if (j.is_null()) return params;
  if (!j.is_object()) throw ConfigError("params: expected an object");
  reject_unknown_keys(j,
                      {"zeta", "zeta_min", "tau", "tau_brake", "mu", "alpha",
                       "beta", "delta", "tau1", "alpha_gipps"},
                      "params");
  if (j.contains("zeta")) params.zeta = parse_quantity(j["zeta"], Dimension::Length, "zeta");
  if (j.contains("zeta_min"))
    params.zeta_min = parse_quantity(j["zeta_min"], Dimension::Length, "zeta_min");
  if (j.contains("tau")) params.tau = parse_quantity(j["tau"], Dimension::Time, "tau");
  if (j.contains("tau_brake"))
    params.tau_brake = parse_quantity(j["tau_brake"], Dimension::Time, "tau_brake");
  if (j.contains("mu")) params.mu = parse_quantity(j["mu"], Dimension::Speed, "mu");
  if (j.contains("alpha"))
    params.alpha = parse_quantity(j["alpha"], Dimension::Acceleration, "alpha");
  if (j.contains("beta"))
    params.beta = parse_quantity(j["beta"], Dimension::Acceleration, "beta");
  if (j.contains("delta"))
    params.delta = parse_quantity(j["delta"], Dimension::Dimensionless, "delta");
  if (j.contains("tau1")) params.tau1 = parse_quantity(j["tau1"], Dimension::Time, "tau1");
  if (j.contains("alpha_gipps"))
    params.alpha_gipps =
        parse_quantity(j["alpha_gipps"], Dimension::Acceleration, "alpha_gipps");
  params.validate();
  return params;
}

LeaderProfile leader_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ConfigError("leader: expected an object with a 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "stationary") {
    reject_unknown_keys(j, {"kind", "x"}, "leader");
    if (!j.contains("x")) throw ConfigError("leader: stationary kind needs 'x'");
    return LeaderProfile::stationary(parse_quantity(j["x"], Dimension::Length, "leader.x"));
  }
  if (kind == "piecewise-constant-speed") {
    reject_unknown_keys(j, {"kind", "x0", "segments"}, "leader");
    if (!j.contains("x0") || !j.contains("segments")) {
      throw ConfigError("leader: piecewise kind needs 'x0' and 'segments'");
    }
    LeaderProfile::PiecewiseConstantSpeed pw;
    pw.x0 = parse_quantity(j["x0"], Dimension::Length, "leader.x0");
    for (const auto& seg : j["segments"]) {
      reject_unknown_keys(seg, {"t", "v"}, "leader.segments");
      pw.segments.push_back(
          {parse_quantity(seg.at("t"), Dimension::Time, "leader.segments.t"),
           parse_quantity(seg.at("v"), Dimension::Speed, "leader.segments.v")});
    }
    LeaderProfile out;
    out.kind = pw;
    out.validate();
    return out;
  }
  if (kind == "sampled") {
    reject_unknown_keys(j, {"kind", "points"}, "leader");
    LeaderProfile::SampledTrajectory tr;
    for (const auto& pt : j.at("points")) {
      reject_unknown_keys(pt, {"t", "x", "v"}, "leader.points");
      tr.samples.push_back(
          {parse_quantity(pt.at("t"), Dimension::Time, "leader.points.t"),
           parse_quantity(pt.at("x"), Dimension::Length, "leader.points.x"),
           parse_quantity(pt.at("v"), Dimension::Speed, "leader.points.v")});
    }
    LeaderProfile out;
    out.kind = tr;
    out.validate();
    return out;
  }
  throw ConfigError("leader: unknown kind '" + kind + "'");
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("scenario: expected an object");
  reject_unknown_keys(j,
                      {"model", "params", "eps", "t_end", "follower", "leader",
                       "clamp_policy", "enforce_eps_precondition"},
                      "scenario");

  Scenario sc;
  if (!j.contains("model")) throw ConfigError("scenario: missing 'model'");
  const auto model = model_from_key(j["model"].get<std::string>());
  if (!model) throw ConfigError("scenario: unknown model '" +
                                j["model"].get<std::string>() + "'");
  sc.model = *model;
  sc.params = params_from_json(j.contains("params") ? j["params"] : json());
  if (j.contains("eps")) {
    sc.eps = StepSize{parse_quantity(j["eps"], Dimension::Time, "eps")};
  }
  if (j.contains("t_end")) {
    sc.t_end = parse_quantity(j["t_end"], Dimension::Time, "t_end");
  }
  if (j.contains("follower")) {
    const auto& f = j["follower"];
    reject_unknown_keys(f, {"x", "v"}, "follower");
    sc.follower0.x =
        f.contains("x") ? parse_quantity(f["x"], Dimension::Length, "follower.x") : 0.0;
    sc.follower0.v =
        f.contains("v") ? parse_quantity(f["v"], Dimension::Speed, "follower.v") : 0.0;
  }
  if (!j.contains("leader")) throw ConfigError("scenario: missing 'leader'");
  sc.leader = leader_from_json(j["leader"]);
  if (j.contains("clamp_policy")) {
    const auto clamp = clamp_policy_from_name(j["clamp_policy"].get<std::string>());
    if (!clamp) {
      throw ConfigError("scenario: unknown clamp_policy '" +
                        j["clamp_policy"].get<std::string>() + "'");
    }
    sc.clamp = *clamp;
  }
  if (j.contains("enforce_eps_precondition")) {
    sc.enforce_eps_precondition = j["enforce_eps_precondition"].get<bool>();
  }
  sc.validate();
  return sc;
}

namespace {

AxisSpec axis_from_json(const json& j, Dimension dim, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field + ": expected an axis object");
  reject_unknown_keys(j, {"min", "max", "count"}, field);
  AxisSpec axis;
  axis.lo = parse_quantity(j.at("min"), dim, field + ".min");
  axis.hi = parse_quantity(j.at("max"), dim, field + ".max");
  axis.count = j.at("count").get<int>();
  if (axis.count < 1) throw ConfigError(field + ": count must be >= 1");
  if (axis.hi < axis.lo) throw ConfigError(field + ": max must be >= min");
  return axis;
}

}  // namespace

SweepSpec sweep_spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("sweep: expected an object");
  reject_unknown_keys(j,
                      {"model", "params", "eps", "t_end", "v0", "z0", "leader",
                       "principles", "clamp_policy", "jobs"},
                      "sweep");

  SweepSpec spec;
  if (!j.contains("model")) throw ConfigError("sweep: missing 'model'");
  const auto model = model_from_key(j["model"].get<std::string>());
  if (!model) {
    throw ConfigError("sweep: unknown model '" + j["model"].get<std::string>() + "'");
  }
  spec.model = *model;
  spec.params = params_from_json(j.contains("params") ? j["params"] : json());
  if (j.contains("eps")) {
    spec.eps = StepSize{parse_quantity(j["eps"], Dimension::Time, "eps")};
  }
  if (j.contains("t_end")) {
    spec.t_end = parse_quantity(j["t_end"], Dimension::Time, "t_end");
  }
  spec.v0 = axis_from_json(j.at("v0"), Dimension::Speed, "v0");
  spec.z0 = axis_from_json(j.at("z0"), Dimension::Length, "z0");
  if (j.contains("leader")) {
    spec.leader = leader_from_json(j["leader"]);
  }
  if (j.contains("principles")) {
    if (j["principles"].is_string() && j["principles"] == "all") {
      spec.principles = all_principles();
    } else {
      spec.principles.clear();
      for (const auto& name : j["principles"]) {
        const auto id = principle_from_name(name.get<std::string>());
        if (!id) {
          throw ConfigError("sweep: unknown principle '" +
                            name.get<std::string>() + "'");
        }
        spec.principles.insert(*id);
      }
    }
  }
  if (j.contains("clamp_policy")) {
    const auto clamp = clamp_policy_from_name(j["clamp_policy"].get<std::string>());
    if (!clamp) {
      throw ConfigError("sweep: unknown clamp_policy '" +
                        j["clamp_policy"].get<std::string>() + "'");
    }
    spec.clamp = *clamp;
  }
  if (j.contains("jobs")) spec.jobs = j["jobs"].get<int>();
  spec.validate();
  return spec;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace carfollow
