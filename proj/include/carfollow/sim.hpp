#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "carfollow/core.hpp"
#include "carfollow/models.hpp"
#include "carfollow/phase.hpp"
#include "carfollow/principles.hpp"

namespace carfollow {

/// How the lead vehicle moves. Stationary is the canonical test case; the
/// other kinds exist for platoon seeding and replaying recorded leaders.
struct LeaderProfile {
  struct Stationary {
    double x0 = 0.0;
  };
  struct PiecewiseConstantSpeed {
    struct Segment {
      double t_start;
      double v;
    };
    double x0 = 0.0;
    std::vector<Segment> segments;  // time-ordered; speed 0 before the first
  };
  struct SampledTrajectory {
    struct Sample {
      double t;
      double x;
      double v;
    };
    std::vector<Sample> samples;  // strictly time-increasing
  };

  std::variant<Stationary, PiecewiseConstantSpeed, SampledTrajectory> kind =
      Stationary{};

  static LeaderProfile stationary(double x0);
  static LeaderProfile constant_speed(double x0, double v);

  void validate() const;
  VehicleState initial_state() const;
  /// Leader state at t_next given the state at t_next - eps, advanced with the
  /// same symplectic convention as the follower. Sampled trajectories
  /// interpolate instead.
  VehicleState advance(const VehicleState& cur, double t_next, const StepSize& eps) const;
  /// Same profile repositioned so that the initial position is x0 (sweep
  /// cells derive leader position from the spacing axis). Sampled kinds shift
  /// all samples.
  LeaderProfile rebased(double x0) const;
  std::string describe() const;
};

enum class ClampPolicy : int {
  None = 0,            // violations stay observable
  StopAtZeroSpeed = 1  // physical vehicle that cannot reverse; comparative runs
};

std::string_view clamp_policy_name(ClampPolicy policy);
std::optional<ClampPolicy> clamp_policy_from_name(std::string_view name);

struct Scenario {
  ModelId model = ModelId::Newell;
  ModelParams params{};
  StepSize eps{1e-3};
  double t_end = 60.0;
  VehicleState follower0{};
  LeaderProfile leader = LeaderProfile::stationary(100.0);
  ClampPolicy clamp = ClampPolicy::None;
  bool enforce_eps_precondition = true;

  void validate() const;  // throws ConfigError
};

using ViolationMask = std::uint8_t;
ViolationMask violation_bit(PrincipleId id);
std::vector<PrincipleId> violations_from_mask(ViolationMask mask);

struct StepRecord {
  PairState state;
  PhaseLabel phase;
  ViolationMask violations;
};

/// A model-domain failure that truncated the run (recorded, not thrown, so
/// sweeps can tabulate them).
struct DomainFailure {
  double t;
  std::string kind;
  std::string message;
};

struct TrajectoryMeta {
  ModelId model = ModelId::Newell;
  ModelParams params{};
  StepSize eps{1e-3};
  double t_end = 0.0;
  ClampPolicy clamp = ClampPolicy::None;
  std::string leader;
};

struct Trajectory {
  TrajectoryMeta meta;
  std::vector<StepRecord> steps;
  std::optional<DomainFailure> failure;

  bool truncated() const { return failure.has_value(); }
  const PairState& initial() const { return steps.front().state; }
  const PairState& terminal() const { return steps.back().state; }
  double min_spacing() const;
  double min_speed() const;
  double max_speed() const;
  double min_accel() const;
};

/// Number of steps ceil(t_end/eps), robust to the quotient landing a few ulps
/// off an integer.
long long step_count(double t_end, const StepSize& eps);

/// Time-march one follower-leader pair. Spacing is read before any update and
/// both vehicles then step together. Domain failures truncate the trajectory
/// with a terminal failure record.
Trajectory run(const Scenario& sc);

/// Vehicle i follows vehicle i-1; vehicle 0 follows the profile. Initial
/// positions must strictly decrease behind the leader. Returns one trajectory
/// per follower, each auditable independently.
std::vector<Trajectory> run_platoon(ModelId model, const ModelParams& params,
                                    const StepSize& eps,
                                    std::span<const VehicleState> initial,
                                    const LeaderProfile& lead, double t_end,
                                    ClampPolicy clamp = ClampPolicy::None);

/// First time after which |v| <= v_tol and |z - zeta| <= z_tol hold through
/// the end of the trajectory; nullopt when they never do.
std::optional<double> settle_time(const Trajectory& traj, double v_tol, double z_tol);

/// CSV emission: header t,x_f,v_f,a_f,x_l,v_l,z,phase,violations, floats at 9
/// significant digits, violations as ;-joined principle codes. stride > 1
/// keeps every stride-th record (plus the first and last).
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, int stride = 1);

}  // namespace carfollow
