#include "carfollow/principles.hpp"

#include <array>
#include <cmath>

#include "carfollow/sim.hpp"

namespace carfollow {

namespace {

struct PrincipleInfo {
  PrincipleId id;
  std::string_view code;
  std::string_view name;
};

constexpr std::array<PrincipleInfo, kPrincipleCount> kPrincipleTable{{
    {PrincipleId::ComfortJamSpacing, "CJS", "comfort-jam-spacing"},
    {PrincipleId::MinimumJamSpacing, "MJS", "minimum-jam-spacing"},
    {PrincipleId::ForwardTraveling, "FT", "forward-traveling"},
    {PrincipleId::SpeedLimit, "SL", "speed-limit"},
    {PrincipleId::MinimumTimeGap, "MTG", "minimum-time-gap"},
    {PrincipleId::BoundedControl, "BC", "bounded-control"},
    {PrincipleId::SafeStoppingDistance, "SSD", "safe-stopping-distance"},
}};

}  // namespace

std::string_view principle_code(PrincipleId id) {
  return kPrincipleTable[static_cast<int>(id)].code;
}

std::string_view principle_name(PrincipleId id) {
  return kPrincipleTable[static_cast<int>(id)].name;
}

std::optional<PrincipleId> principle_from_name(std::string_view name) {
  for (const auto& info : kPrincipleTable) {
    if (info.name == name || info.code == name) return info.id;
  }
  return std::nullopt;
}

std::set<PrincipleId> all_principles() {
  std::set<PrincipleId> out;
  for (const auto& info : kPrincipleTable) out.insert(info.id);
  return out;
}

std::set<PrincipleId> zeroth_and_first_order_principles() {
  return {PrincipleId::ComfortJamSpacing, PrincipleId::MinimumJamSpacing,
          PrincipleId::ForwardTraveling, PrincipleId::SpeedLimit,
          PrincipleId::MinimumTimeGap};
}

bool check_comfort_jam_spacing(const PairState& p, const ModelParams& params) {
  return p.spacing >= params.zeta - kTolLength;
}

bool check_minimum_jam_spacing(const PairState& p, const ModelParams& params) {
  return p.spacing >= params.zeta_min - kTolLength;
}

bool check_forward_traveling(const VehicleState& s) {
  return s.v >= -kTolSpeed;
}

bool check_speed_limit(double v_next, const ModelParams& params) {
  return v_next <= params.mu + kTolSpeed;
}

bool check_min_time_gap(const PairState& p, double v_next, const ModelParams& params) {
  return v_next <= p.clearance / params.tau + kTolSpeed;
}

bool check_bounded_control(double a, double v, const ModelParams& params) {
  const double upper = params.alpha * (1.0 - v / params.mu);
  return a >= -params.beta - kTolAccel && a <= upper + kTolAccel;
}

double safe_stopping_distance(double v, const ModelParams& params) {
  if (v < 0.0 || !std::isfinite(v)) {
    throw DomainError("domain", "safe_stopping_distance: v must be >= 0");
  }
  return v * params.tau_brake + v * v / (2.0 * params.beta);
}

std::optional<BrakingOnset> find_braking_onset(const Trajectory& traj,
                                               const BrakingOnsetRule& rule) {
  const auto& steps = traj.steps;
  const double eps = traj.meta.eps.eps;
  const auto window = static_cast<std::size_t>(std::llround(rule.sustain / eps));
  if (steps.size() < 2) return std::nullopt;

  std::size_t run_start = 0;
  std::size_t run_len = 0;
  for (std::size_t i = 1; i < steps.size(); ++i) {
    const auto& s = steps[i].state;
    const bool braking = s.follower.a < rule.accel_threshold &&
                         s.leader.v == 0.0 && s.follower.v > 0.0;
    if (braking) {
      if (run_len == 0) run_start = i;
      ++run_len;
      if (run_len >= window) {
        const auto& onset = steps[run_start].state;
        return BrakingOnset{onset.t, onset.spacing, onset.follower.v};
      }
    } else {
      run_len = 0;
    }
  }
  return std::nullopt;
}

bool ComplianceReport::all_passed() const {
  for (const auto& [id, result] : results) {
    if (!result.passed) return false;
  }
  return true;
}

bool ComplianceReport::passed(PrincipleId id) const {
  auto it = results.find(id);
  return it == results.end() || it->second.passed;
}

ComplianceReport audit_trajectory(const Trajectory& traj, const ModelParams& params,
                                  const std::set<PrincipleId>& checked,
                                  const BrakingOnsetRule& rule) {
  ComplianceReport report;
  const auto& steps = traj.steps;

  auto record = [&](PrincipleId id, bool ok, double t, double observed, double bound) {
    auto& result = report.results[id];
    if (!ok && result.passed) {
      result.passed = false;
      result.first_violation = Violation{id, t, observed, bound};
    }
  };
  for (PrincipleId id : checked) report.results[id];  // ensure presence

  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i].state;
    if (checked.count(PrincipleId::ComfortJamSpacing)) {
      record(PrincipleId::ComfortJamSpacing, check_comfort_jam_spacing(s, params),
             s.t, s.spacing, params.zeta);
    }
    if (checked.count(PrincipleId::MinimumJamSpacing)) {
      record(PrincipleId::MinimumJamSpacing, check_minimum_jam_spacing(s, params),
             s.t, s.spacing, params.zeta_min);
    }
    if (checked.count(PrincipleId::ForwardTraveling)) {
      record(PrincipleId::ForwardTraveling, check_forward_traveling(s.follower),
             s.t, s.follower.v, 0.0);
    }
    if (checked.count(PrincipleId::SpeedLimit)) {
      record(PrincipleId::SpeedLimit, check_speed_limit(s.follower.v, params),
             s.t, s.follower.v, params.mu);
    }
    if (i > 0) {
      const auto& prev = steps[i - 1].state;
      if (checked.count(PrincipleId::MinimumTimeGap)) {
        record(PrincipleId::MinimumTimeGap,
               check_min_time_gap(prev, s.follower.v, params), s.t, s.follower.v,
               prev.clearance / params.tau);
      }
      if (checked.count(PrincipleId::BoundedControl)) {
        record(PrincipleId::BoundedControl,
               check_bounded_control(s.follower.a, prev.follower.v, params), s.t,
               s.follower.a, params.beta);
      }
    }
  }

  if (checked.count(PrincipleId::SafeStoppingDistance)) {
    report.braking_onset = find_braking_onset(traj, rule);
    report.ssd_factor = rule.ssd_factor;
    if (report.braking_onset) {
      report.ssd_applicable = true;
      report.ssd_at_onset = safe_stopping_distance(report.braking_onset->speed, params);
      const double bound = rule.ssd_factor * report.ssd_at_onset;
      record(PrincipleId::SafeStoppingDistance,
             report.braking_onset->spacing <= bound, report.braking_onset->t,
             report.braking_onset->spacing, bound);
    }
  }

  return report;
}

}  // namespace carfollow
