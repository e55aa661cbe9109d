#pragma once

#include "carfollow/errors.hpp"

namespace carfollow {

// Absolute tolerances used for boundary classification of principle checks.
// The discretization is exact arithmetic on closed forms; these only absorb
// floating-point rounding.
inline constexpr double kTolLength = 1e-9;  // [m]
inline constexpr double kTolSpeed = 1e-9;   // [m/s]
inline constexpr double kTolAccel = 1e-9;   // [m/s^2]

/// Behavioral parameter set shared by all models. SI units throughout.
struct ModelParams {
  double zeta = 7.0;         ///< comfort jam spacing [m]
  double zeta_min = 5.0;     ///< minimum jam spacing [m]
  double tau = 1.6;          ///< minimum time gap [s]
  double tau_brake = 1.0;    ///< reaction time under braking [s]
  double mu = 30.0;          ///< speed limit [m/s]
  double alpha = 0.73;       ///< comfort acceleration bound [m/s^2]
  double beta = 1.67;        ///< comfort deceleration bound, magnitude [m/s^2]
  double delta = 4.0;        ///< IDM speed-term exponent
  double tau1 = 2.0 / 3.0;   ///< original-Gipps headway parameter [s]
  double alpha_gipps = 1.7;  ///< original-Gipps acceleration scale [m/s^2]

  /// Throws ConfigError when an invariant is violated
  /// (zeta > zeta_min > 0, tau > tau_brake > 0, positive bounds).
  void validate() const;
};

/// Kinematics of one vehicle at one instant. `a` is the acceleration applied
/// over the step that produced this state; it is 0 at t=0. Negative v and x
/// are representable on purpose: several findings are about observing them.
struct VehicleState {
  double x = 0.0;  ///< position of the rear bumper [m]
  double v = 0.0;  ///< speed [m/s]
  double a = 0.0;  ///< acceleration [m/s^2]
};

/// Simulation step size; eps > 0 enforced at construction.
struct StepSize {
  explicit StepSize(double eps_s);
  double eps;
};

/// Follower + leader at one instant with the derived spacing z = x_l - x_f
/// and clearance z - zeta.
struct PairState {
  double t = 0.0;
  VehicleState follower;
  VehicleState leader;
  double spacing = 0.0;
  double clearance = 0.0;
};

PairState make_pair_state(double t, const VehicleState& follower,
                          const VehicleState& leader, const ModelParams& params);

/// One step of the symplectic scheme: the new speed is used in the position
/// update. v' = v + eps*a, x' = x + eps*v'.
VehicleState symplectic_step(const VehicleState& s, double accel,
                             const StepSize& eps);

/// Advance by prescribing the next speed exactly; the implied acceleration
/// (v_next - v)/eps is recorded on the returned state.
VehicleState step_from_speed(const VehicleState& s, double v_next,
                             const StepSize& eps);

/// Time gap clearance/v_next. Returns +inf for a stationary plan with open
/// clearance; throws DomainError("undefined-gap") when v_next = 0 with
/// clearance <= 0, or for negative v_next.
double time_gap(const PairState& p, double v_next);

}  // namespace carfollow
