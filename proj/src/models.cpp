#include "carfollow/models.hpp"

#include <cmath>
#include <string>

#include "carfollow/phase.hpp"

namespace carfollow {

namespace {

void require_newell_step(const ModelParams& params, const StepSize& eps,
                         bool enforce) {
  if (enforce && eps.eps > params.tau) {
    throw PreconditionError("newell-family step requires eps <= tau (eps=" +
                            std::to_string(eps.eps) + ", tau=" +
                            std::to_string(params.tau) + ")");
  }
}

double accel_bound(const ModelParams& params, double v) {
  return params.alpha * (1.0 - v / params.mu);
}

}  // namespace

std::string_view model_key(ModelId id) {
  switch (id) {
    case ModelId::Newell: return "newell";
    case ModelId::BANewell: return "ba-newell";
    case ModelId::BDANewell: return "bda-newell";
    case ModelId::IDM: return "idm";
    case ModelId::GippsFull: return "gipps";
    case ModelId::GippsSimplified: return "gipps-simplified";
  }
  return "unknown";
}

std::optional<ModelId> model_from_key(std::string_view key) {
  for (ModelId id : {ModelId::Newell, ModelId::BANewell, ModelId::BDANewell,
                     ModelId::IDM, ModelId::GippsFull, ModelId::GippsSimplified}) {
    if (model_key(id) == key) return id;
  }
  return std::nullopt;
}

bool is_newell_family(ModelId id) {
  return id == ModelId::Newell || id == ModelId::BANewell || id == ModelId::BDANewell;
}

double equilibrium_speed(const PairState& p, const ModelParams& params) {
  return std::min(params.mu, p.clearance / params.tau);
}

ModelOutput newell_next(const PairState& p, const ModelParams& params,
                        const StepSize& eps, bool enforce_eps_precondition) {
  require_newell_step(params, eps, enforce_eps_precondition);
  const double v = p.follower.v;
  const double v_star = equilibrium_speed(p, params);
  ModelOutput out;
  out.v_next = v_star;
  out.a = (v_star - v) / eps.eps;
  if (v == v_star) {
    out.phase = PhaseLabel::EquilibriumCruising;
  } else if (v < v_star) {
    out.phase = PhaseLabel::EquilibriumAcceleration;
  } else {
    out.phase = PhaseLabel::EquilibriumDeceleration;
  }
  return out;
}

ModelOutput ba_newell_next(const PairState& p, const ModelParams& params,
                           const StepSize& eps, bool enforce_eps_precondition) {
  require_newell_step(params, eps, enforce_eps_precondition);
  const double v = p.follower.v;
  const double v_star = equilibrium_speed(p, params);
  const double a_bound = accel_bound(params, v);
  const double a_eq = (v_star - v) / eps.eps;

  ModelOutput out;
  out.a = std::min(a_bound, a_eq);
  out.v_next = v + eps.eps * out.a;
  if (v == v_star) {
    out.phase = PhaseLabel::EquilibriumCruising;
  } else if (a_bound <= a_eq) {
    out.phase = PhaseLabel::BoundedAcceleration;
  } else if (a_eq > 0.0) {
    out.phase = PhaseLabel::EquilibriumAcceleration;
  } else {
    out.phase = PhaseLabel::EquilibriumDeceleration;
  }
  return out;
}

ModelOutput bda_newell_next(const PairState& p, const ModelParams& params,
                            const StepSize& eps, bool enforce_eps_precondition) {
  require_newell_step(params, eps, enforce_eps_precondition);
  const double v = p.follower.v;
  const double v_star = equilibrium_speed(p, params);
  const double a_bound = accel_bound(params, v);
  const double a_eq = (v_star - v) / eps.eps;
  const double inner = std::min(a_bound, a_eq);

  ModelOutput out;
  out.a = std::max(-params.beta, inner);
  out.v_next = v + eps.eps * out.a;
  if (v == v_star) {
    out.phase = PhaseLabel::EquilibriumCruising;
  } else if (inner <= -params.beta) {
    out.phase = PhaseLabel::BoundedDeceleration;
  } else if (a_bound <= a_eq) {
    out.phase = PhaseLabel::BoundedAcceleration;
  } else if (a_eq > 0.0) {
    out.phase = PhaseLabel::EquilibriumAcceleration;
  } else {
    out.phase = PhaseLabel::EquilibriumDeceleration;
  }
  return out;
}

double idm_accel(const PairState& p, const ModelParams& params) {
  if (p.spacing <= params.zeta_min) {
    throw DomainError("singular-input",
                      "idm_accel: spacing <= zeta_min (z=" +
                          std::to_string(p.spacing) + ")");
  }
  const double v = p.follower.v;
  const double v_l = p.leader.v;
  const double c = 2.0 * std::sqrt(params.alpha * params.beta);
  const double desired = c * (params.zeta - params.zeta_min + params.tau * v) +
                         v * (v - v_l);
  const double ratio = desired / (c * (p.spacing - params.zeta_min));
  return params.alpha *
         (1.0 - std::pow(v / params.mu, params.delta) - ratio * ratio);
}

ModelOutput gipps_full_next(const PairState& p, const ModelParams& params,
                            const StepSize& eps) {
  const double v = p.follower.v;
  const double v_l = p.leader.v;
  const double bt1 = params.beta * params.tau1;
  const double disc = bt1 * bt1 + 2.0 * params.beta * p.clearance +
                      2.0 * params.beta * (params.tau1 - params.tau_brake) * v +
                      v_l * v_l;
  if (disc < 0.0) {
    throw DomainError("ill-defined-model",
                      "gipps_full_next: negative safe-branch discriminant (" +
                          std::to_string(disc) + ")");
  }
  const double accel_branch =
      v + 2.5 * params.alpha_gipps * eps.eps * (1.0 - v / params.mu) *
              std::sqrt(0.025 + v / params.mu);
  const double safe_branch = -bt1 + std::sqrt(disc);

  ModelOutput out;
  out.v_next = std::min(accel_branch, safe_branch);
  out.a = (out.v_next - v) / eps.eps;
  out.phase = accel_branch <= safe_branch ? PhaseLabel::GippsAccelBranch
                                          : PhaseLabel::GippsSafeBranch;
  return out;
}

ModelOutput gipps_simplified_next(const PairState& p, const ModelParams& params,
                                  const StepSize& eps) {
  const double v = p.follower.v;
  const double v_l = p.leader.v;
  const double bt = params.beta * params.tau_brake;
  const double disc = bt * bt + 2.0 * params.beta * p.clearance + v_l * v_l;
  if (disc < 0.0) {
    throw DomainError(
        "ill-defined-model",
        "gipps_simplified_next: negative safe-branch discriminant (" +
            std::to_string(disc) + ")");
  }
  const double accel_branch = v + eps.eps * accel_bound(params, v);
  const double safe_branch = -bt + std::sqrt(disc);

  ModelOutput out;
  out.v_next = std::min(accel_branch, safe_branch);
  out.a = (out.v_next - v) / eps.eps;
  out.phase = accel_branch <= safe_branch ? PhaseLabel::GippsAccelBranch
                                          : PhaseLabel::GippsSafeBranch;
  return out;
}

ModelOutput model_next(ModelId id, const PairState& p, const ModelParams& params,
                       const StepSize& eps, bool enforce_eps_precondition) {
  switch (id) {
    case ModelId::Newell:
      return newell_next(p, params, eps, enforce_eps_precondition);
    case ModelId::BANewell:
      return ba_newell_next(p, params, eps, enforce_eps_precondition);
    case ModelId::BDANewell:
      return bda_newell_next(p, params, eps, enforce_eps_precondition);
    case ModelId::IDM: {
      ModelOutput out;
      out.a = idm_accel(p, params);
      out.v_next = p.follower.v + eps.eps * out.a;
      out.phase = PhaseLabel::Unclassified;
      return out;
    }
    case ModelId::GippsFull:
      return gipps_full_next(p, params, eps);
    case ModelId::GippsSimplified:
      return gipps_simplified_next(p, params, eps);
  }
  throw ConfigError("model_next: unknown model id");
}

}  // namespace carfollow
