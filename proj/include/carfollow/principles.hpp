#pragma once

#include <map>
#include <optional>
#include <set>
#include <string_view>

#include "carfollow/core.hpp"

namespace carfollow {

struct Trajectory;  // sim.hpp

/// The checkable driving principles. Maximum speed is the models' objective
/// (satisfied by construction in the Newell family) and the fundamental
/// diagram is a steady-state property; neither is a per-step predicate here.
enum class PrincipleId : int {
  ComfortJamSpacing = 0,
  MinimumJamSpacing = 1,
  ForwardTraveling = 2,
  SpeedLimit = 3,
  MinimumTimeGap = 4,
  BoundedControl = 5,
  SafeStoppingDistance = 6,
};

inline constexpr int kPrincipleCount = 7;

std::string_view principle_code(PrincipleId id);  // short CSV code, e.g. "CJS"
std::string_view principle_name(PrincipleId id);  // e.g. "comfort-jam-spacing"
std::optional<PrincipleId> principle_from_name(std::string_view name);
std::set<PrincipleId> all_principles();
std::set<PrincipleId> zeroth_and_first_order_principles();

struct Violation {
  PrincipleId principle;
  double t;
  double observed;
  double bound;
};

// Per-step predicates (Eq. boundaries padded by the kTol* constants).
bool check_comfort_jam_spacing(const PairState& p, const ModelParams& params);
bool check_minimum_jam_spacing(const PairState& p, const ModelParams& params);
bool check_forward_traveling(const VehicleState& s);
bool check_speed_limit(double v_next, const ModelParams& params);
bool check_min_time_gap(const PairState& p, double v_next, const ModelParams& params);
bool check_bounded_control(double a, double v, const ModelParams& params);

/// B(v) = v*tau_brake + v^2/(2*beta). Throws DomainError for negative v.
double safe_stopping_distance(double v, const ModelParams& params);

/// Braking onset for the stopping-distance audit: first time the acceleration
/// stays below `accel_threshold` for at least `sustain` seconds while the
/// follower closes on a stationary leader. The paper compares onset distance
/// against B(v) but gives no onset definition; this rule is ours and is
/// surfaced in report output.
struct BrakingOnsetRule {
  double accel_threshold = -0.05;  // [m/s^2]
  double sustain = 0.5;            // [s]
  double ssd_factor = 1.5;         // pass iff onset spacing <= factor * B(v)
};

struct BrakingOnset {
  double t;
  double spacing;
  double speed;
};

std::optional<BrakingOnset> find_braking_onset(const Trajectory& traj,
                                               const BrakingOnsetRule& rule = {});

struct PrincipleResult {
  bool passed = true;
  std::optional<Violation> first_violation;
};

/// Per-principle verdicts over one trajectory with earliest-violation
/// witnesses. The stopping-distance entry is an audit of braking onset
/// against ssd_factor * B(v_onset); it passes vacuously when no onset exists
/// or the leader is not stationary.
struct ComplianceReport {
  std::map<PrincipleId, PrincipleResult> results;
  std::optional<BrakingOnset> braking_onset;
  double ssd_at_onset = 0.0;
  double ssd_factor = 0.0;
  bool ssd_applicable = false;
  bool all_passed() const;
  bool passed(PrincipleId id) const;
};

ComplianceReport audit_trajectory(const Trajectory& traj, const ModelParams& params,
                                  const std::set<PrincipleId>& checked,
                                  const BrakingOnsetRule& rule = {});

}  // namespace carfollow
