#include "carfollow/core.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace carfollow {

namespace {

bool finite(const VehicleState& s) {
  return std::isfinite(s.x) && std::isfinite(s.v) && std::isfinite(s.a);
}

}  // namespace

void ModelParams::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("invalid params: " + what); };
  if (!(zeta_min > 0.0)) fail("zeta_min must be > 0");
  if (!(zeta > zeta_min)) fail("zeta must exceed zeta_min");
  if (!(tau_brake > 0.0)) fail("tau_brake must be > 0");
  if (!(tau > tau_brake)) fail("tau must exceed tau_brake");
  if (!(mu > 0.0)) fail("mu must be > 0");
  if (!(alpha > 0.0)) fail("alpha must be > 0");
  if (!(beta > 0.0)) fail("beta must be > 0");
  if (!(delta > 0.0)) fail("delta must be > 0");
  if (!(tau1 > 0.0)) fail("tau1 must be > 0");
  if (!(alpha_gipps > 0.0)) fail("alpha_gipps must be > 0");
}

StepSize::StepSize(double eps_s) : eps(eps_s) {
  if (!(std::isfinite(eps) && eps > 0.0)) {
    throw ConfigError("step size must be finite and > 0");
  }
}

PairState make_pair_state(double t, const VehicleState& follower,
                          const VehicleState& leader, const ModelParams& params) {
  PairState p;
  p.t = t;
  p.follower = follower;
  p.leader = leader;
  p.spacing = leader.x - follower.x;
  p.clearance = p.spacing - params.zeta;
  return p;
}

VehicleState symplectic_step(const VehicleState& s, double accel,
                             const StepSize& eps) {
  if (!finite(s) || !std::isfinite(accel)) {
    throw InvalidStateError("symplectic_step: non-finite input");
  }
  VehicleState next;
  next.v = s.v + eps.eps * accel;
  next.x = s.x + eps.eps * next.v;
  next.a = accel;
  return next;
}

VehicleState step_from_speed(const VehicleState& s, double v_next,
                             const StepSize& eps) {
  if (!finite(s) || !std::isfinite(v_next)) {
    throw InvalidStateError("step_from_speed: non-finite input");
  }
  VehicleState next;
  next.v = v_next;
  next.x = s.x + eps.eps * v_next;
  next.a = (v_next - s.v) / eps.eps;
  return next;
}

double time_gap(const PairState& p, double v_next) {
  if (v_next < 0.0 || !std::isfinite(v_next)) {
    throw DomainError("undefined-gap", "time_gap: v_next must be >= 0");
  }
  if (v_next == 0.0) {
    if (p.clearance > 0.0) return std::numeric_limits<double>::infinity();
    throw DomainError("undefined-gap",
                      "time_gap: zero planned speed with non-positive clearance");
  }
  return p.clearance / v_next;
}

}  // namespace carfollow
