#pragma once

#include <optional>
#include <string_view>

#include "carfollow/core.hpp"

namespace carfollow {

enum class PhaseLabel : int;  // defined in phase.hpp

enum class ModelId : int {
  Newell,
  BANewell,
  BDANewell,
  IDM,
  GippsFull,
  GippsSimplified,
};

/// Stable string keys used in CLI flags and config files.
std::string_view model_key(ModelId id);
std::optional<ModelId> model_from_key(std::string_view key);
bool is_newell_family(ModelId id);

/// Result of one model evaluation: planned next speed, the implied (or
/// prescribed) acceleration over the step, and the governing phase.
struct ModelOutput {
  double v_next;
  double a;
  PhaseLabel phase;
};

/// v_* = min(mu, (z - zeta)/tau). Negative clearance yields a negative
/// equilibrium speed; callers that need the backward-travel findings rely on
/// that.
double equilibrium_speed(const PairState& p, const ModelParams& params);

/// Newell: v(t+eps) = v_*(t). Requires eps <= tau unless enforcement is
/// explicitly waived by the caller.
ModelOutput newell_next(const PairState& p, const ModelParams& params,
                        const StepSize& eps, bool enforce_eps_precondition = true);

/// Newell with the TWOPAS acceleration bound:
/// a = min(alpha(1 - v/mu), (v_* - v)/eps).
ModelOutput ba_newell_next(const PairState& p, const ModelParams& params,
                           const StepSize& eps, bool enforce_eps_precondition = true);

/// BA-Newell with the deceleration bound:
/// a = max(-beta, min(alpha(1 - v/mu), (v_* - v)/eps)).
ModelOutput bda_newell_next(const PairState& p, const ModelParams& params,
                            const StepSize& eps, bool enforce_eps_precondition = true);

/// IDM acceleration. Throws DomainError("singular-input") for spacing <=
/// zeta_min, where the interaction denominator is non-positive.
double idm_accel(const PairState& p, const ModelParams& params);

/// Original Gipps model (acceleration branch with the 2.5*alpha' shape, safe
/// branch with tau1). Throws DomainError("ill-defined-model") when the safe
/// branch discriminant is negative.
ModelOutput gipps_full_next(const PairState& p, const ModelParams& params,
                            const StepSize& eps);

/// Simplified Gipps model (tau1 = tau_brake, TWOPAS acceleration branch).
ModelOutput gipps_simplified_next(const PairState& p, const ModelParams& params,
                                  const StepSize& eps);

/// Uniform dispatch over ModelId.
ModelOutput model_next(ModelId id, const PairState& p, const ModelParams& params,
                       const StepSize& eps, bool enforce_eps_precondition = true);

}  // namespace carfollow
