#include "carfollow/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "carfollow/sim.hpp"

namespace carfollow {

std::string_view phase_name(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::Unclassified: return "unclassified";
    case PhaseLabel::BoundedAcceleration: return "bounded-acceleration";
    case PhaseLabel::EquilibriumCruising: return "equilibrium-cruising";
    case PhaseLabel::EquilibriumAcceleration: return "equilibrium-acceleration";
    case PhaseLabel::EquilibriumDeceleration: return "equilibrium-deceleration";
    case PhaseLabel::BoundedDeceleration: return "bounded-deceleration";
    case PhaseLabel::GippsAccelBranch: return "gipps-accel";
    case PhaseLabel::GippsSafeBranch: return "gipps-safe";
  }
  return "unclassified";
}

int phase_code(PhaseLabel label) { return static_cast<int>(label); }

std::string_view region_name(RegionLabel label) {
  switch (label) {
    case RegionLabel::Feasible: return "feasible";
    case RegionLabel::GreyComfortViolation: return "grey-comfort-violation";
    case RegionLabel::BlackMinimumViolation: return "black-minimum-violation";
    case RegionLabel::InfeasibleNegativeSpeed: return "infeasible-negative-speed";
  }
  return "feasible";
}

RegionLabel region_of(double v, double z, const ModelParams& params) {
  if (v < 0.0) return RegionLabel::InfeasibleNegativeSpeed;
  if (z < params.zeta_min) return RegionLabel::BlackMinimumViolation;
  if (z < params.zeta) return RegionLabel::GreyComfortViolation;
  return RegionLabel::Feasible;
}

std::vector<double> AxisSpec::values() const {
  if (count < 1) throw ConfigError("axis count must be >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    out.push_back(lo);
    return out;
  }
  for (int i = 0; i < count; ++i) {
    out.push_back(i == count - 1 ? hi
                                 : lo + (hi - lo) * static_cast<double>(i) /
                                            static_cast<double>(count - 1));
  }
  return out;
}

namespace {

// Region membership from the paper's phase definitions in the (v, a) plane,
// expressed through v_* and the acceleration bound. The printed (v, z) region
// list for equilibrium acceleration carries a sign typo (see ledger); these
// forms are the consistent equivalents.
std::vector<PhaseLabel> newell_family_candidates(ModelId id, double v, double v_star,
                                                 double a_bound, double beta,
                                                 double eps) {
  std::vector<PhaseLabel> out;
  const bool bounded_decel = id == ModelId::BDANewell;
  const bool bounded_accel = id != ModelId::Newell;
  const double accel_reach = v + eps * a_bound;  // speed after one bounded step

  if (v == v_star) out.push_back(PhaseLabel::EquilibriumCruising);
  if (bounded_accel && accel_reach <= v_star)
    out.push_back(PhaseLabel::BoundedAcceleration);
  if (bounded_decel && v >= v_star + eps * beta)
    out.push_back(PhaseLabel::BoundedDeceleration);
  if (bounded_accel) {
    if (v < v_star && accel_reach > v_star)
      out.push_back(PhaseLabel::EquilibriumAcceleration);
  } else {
    if (v < v_star) out.push_back(PhaseLabel::EquilibriumAcceleration);
  }
  if (bounded_decel) {
    if (v > v_star && v < v_star + eps * beta)
      out.push_back(PhaseLabel::EquilibriumDeceleration);
  } else {
    if (v > v_star) out.push_back(PhaseLabel::EquilibriumDeceleration);
  }
  return out;
}

constexpr PhaseLabel kPriority[] = {
    PhaseLabel::EquilibriumCruising, PhaseLabel::BoundedAcceleration,
    PhaseLabel::BoundedDeceleration, PhaseLabel::EquilibriumAcceleration,
    PhaseLabel::EquilibriumDeceleration,
};

}  // namespace

std::vector<PhaseLabel> classify_candidates(ModelId id, const PairState& p,
                                            const ModelParams& params,
                                            const StepSize& eps) {
  switch (id) {
    case ModelId::Newell:
    case ModelId::BANewell:
    case ModelId::BDANewell: {
      const double v_star = equilibrium_speed(p, params);
      const double a_bound = params.alpha * (1.0 - p.follower.v / params.mu);
      return newell_family_candidates(id, p.follower.v, v_star, a_bound,
                                      params.beta, eps.eps);
    }
    case ModelId::IDM:
      return {PhaseLabel::Unclassified};
    case ModelId::GippsFull:
    case ModelId::GippsSimplified: {
      const ModelOutput out = model_next(id, p, params, eps);
      return {out.phase};
    }
  }
  return {};
}

PhaseLabel classify(ModelId id, const PairState& p, const ModelParams& params,
                    const StepSize& eps) {
  const auto candidates = classify_candidates(id, p, params, eps);
  if (candidates.empty()) return PhaseLabel::Unclassified;
  if (candidates.size() == 1) return candidates.front();
  for (PhaseLabel label : kPriority) {
    if (std::find(candidates.begin(), candidates.end(), label) != candidates.end())
      return label;
  }
  return candidates.front();
}

std::vector<FieldPoint> vector_field(ModelId id, const ModelParams& params,
                                     const AxisSpec& v_axis, const AxisSpec& z_axis,
                                     const StepSize& eps) {
  std::vector<FieldPoint> out;
  const auto vs = v_axis.values();
  const auto zs = z_axis.values();
  out.reserve(vs.size() * zs.size());
  const VehicleState leader{};  // stationary at the origin of the spacing axis
  for (double z : zs) {
    for (double v : vs) {
      VehicleState follower;
      follower.x = -z;
      follower.v = v;
      const PairState p = make_pair_state(0.0, follower, leader, params);
      FieldPoint fp{v, z, 0.0, -v, PhaseLabel::Unclassified, false};
      try {
        const ModelOutput next = model_next(id, p, params, eps);
        fp.dvdt = next.a;
        fp.phase = next.phase;
      } catch (const DomainError&) {
        fp.dvdt = std::numeric_limits<double>::quiet_NaN();
        fp.ill_defined = true;
      }
      out.push_back(fp);
    }
  }
  return out;
}

double critical_spacing(const ModelParams& params) {
  return params.mu * params.tau + params.zeta;
}

namespace {

double analytic_fd_speed(ModelId id, const ModelParams& params, double k) {
  const double kappa = 1.0 / params.zeta;
  if (!(k > 0.0) || k > kappa * (1.0 + 1e-12)) {
    throw ConfigError("fundamental diagram density must lie in (0, 1/zeta]");
  }
  const double spacing = 1.0 / k;
  switch (id) {
    case ModelId::Newell:
    case ModelId::BANewell:
    case ModelId::BDANewell:
      return std::min(params.mu, (spacing - params.zeta) / params.tau);
    case ModelId::GippsFull:
    case ModelId::GippsSimplified:
      return std::min(params.mu, (spacing - params.zeta) / params.tau_brake);
    case ModelId::IDM:
      throw UnsupportedError("no closed-form fundamental diagram for the IDM");
  }
  throw ConfigError("unknown model id");
}

}  // namespace

std::vector<FDPoint> fundamental_diagram(ModelId id, const ModelParams& params,
                                         const std::vector<double>& densities) {
  std::vector<FDPoint> out;
  out.reserve(densities.size());
  for (double k : densities) {
    const double v = analytic_fd_speed(id, params, k);
    out.push_back(FDPoint{k, v, k * v});
  }
  return out;
}

FDPoint fd_from_simulation(ModelId id, const ModelParams& params, double k,
                           const StepSize& eps, double t_end) {
  const double v_eq = analytic_fd_speed(id, params, k);
  const double spacing = 1.0 / k;

  // Three followers seeded at uniform spacing behind a leader cruising at the
  // analytic speed; steadiness of the tail vehicle is the measurement.
  std::vector<VehicleState> initial;
  for (int i = 1; i <= 3; ++i) {
    VehicleState s;
    s.x = -spacing * static_cast<double>(i);
    s.v = v_eq;
    initial.push_back(s);
  }
  const auto trajectories =
      run_platoon(id, params, eps, initial, LeaderProfile::constant_speed(0.0, v_eq),
                  t_end, ClampPolicy::None);
  const Trajectory& tail = trajectories.back();
  if (tail.truncated()) {
    throw SearchError("fd_from_simulation: model domain failure at k=" +
                      std::to_string(k));
  }

  const std::size_t n = tail.steps.size();
  const std::size_t window = std::max<std::size_t>(n / 4, 2);
  double v_min = std::numeric_limits<double>::infinity();
  double v_max = -std::numeric_limits<double>::infinity();
  double v_sum = 0.0;
  double z_sum = 0.0;
  for (std::size_t i = n - window; i < n; ++i) {
    const auto& s = tail.steps[i].state;
    v_min = std::min(v_min, s.follower.v);
    v_max = std::max(v_max, s.follower.v);
    v_sum += s.follower.v;
    z_sum += s.spacing;
  }
  const double v_mean = v_sum / static_cast<double>(window);
  const double z_mean = z_sum / static_cast<double>(window);
  if (v_max - v_min > 1e-6 || std::abs(z_mean - spacing) > 1e-3 * spacing) {
    throw SearchError("fd_from_simulation: no steady state at k=" +
                      std::to_string(k));
  }
  return FDPoint{k, v_mean, k * v_mean};
}

}  // namespace carfollow
