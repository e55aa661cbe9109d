#include "carfollow/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "carfollow/io.hpp"

namespace carfollow {

LeaderProfile LeaderProfile::stationary(double x0) {
  LeaderProfile p;
  p.kind = Stationary{x0};
  return p;
}

LeaderProfile LeaderProfile::constant_speed(double x0, double v) {
  LeaderProfile p;
  PiecewiseConstantSpeed pw;
  pw.x0 = x0;
  pw.segments.push_back({0.0, v});
  p.kind = pw;
  return p;
}

void LeaderProfile::validate() const {
  if (const auto* pw = std::get_if<PiecewiseConstantSpeed>(&kind)) {
    for (std::size_t i = 1; i < pw->segments.size(); ++i) {
      if (!(pw->segments[i].t_start > pw->segments[i - 1].t_start)) {
        throw ConfigError("leader profile segments must be time-ordered");
      }
    }
  } else if (const auto* tr = std::get_if<SampledTrajectory>(&kind)) {
    if (tr->samples.empty()) {
      throw ConfigError("sampled leader trajectory needs at least one sample");
    }
    for (std::size_t i = 1; i < tr->samples.size(); ++i) {
      if (!(tr->samples[i].t > tr->samples[i - 1].t)) {
        throw ConfigError("sampled leader trajectory must be strictly time-increasing");
      }
    }
  }
}

VehicleState LeaderProfile::initial_state() const {
  VehicleState s;
  if (const auto* st = std::get_if<Stationary>(&kind)) {
    s.x = st->x0;
  } else if (const auto* pw = std::get_if<PiecewiseConstantSpeed>(&kind)) {
    s.x = pw->x0;
    if (!pw->segments.empty() && pw->segments.front().t_start <= 0.0) {
      // speed at t=0; later segments start later by validation
      for (const auto& seg : pw->segments) {
        if (seg.t_start <= 0.0) s.v = seg.v;
      }
    }
  } else {
    const auto& tr = std::get<SampledTrajectory>(kind);
    s.x = tr.samples.front().x;
    s.v = tr.samples.front().v;
  }
  return s;
}

namespace {

double piecewise_speed_at(const LeaderProfile::PiecewiseConstantSpeed& pw, double t) {
  double v = 0.0;
  for (const auto& seg : pw.segments) {
    if (seg.t_start <= t) v = seg.v;
    else break;
  }
  return v;
}

LeaderProfile::SampledTrajectory::Sample sampled_state_at(
    const LeaderProfile::SampledTrajectory& tr, double t) {
  const auto& s = tr.samples;
  if (t <= s.front().t) return s.front();
  if (t >= s.back().t) return s.back();
  auto it = std::upper_bound(
      s.begin(), s.end(), t,
      [](double value, const auto& sample) { return value < sample.t; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  return {t, lo.x + w * (hi.x - lo.x), lo.v + w * (hi.v - lo.v)};
}

}  // namespace

VehicleState LeaderProfile::advance(const VehicleState& cur, double t_next,
                                    const StepSize& eps) const {
  VehicleState next;
  if (std::holds_alternative<Stationary>(kind)) {
    next = cur;
    next.v = 0.0;
    next.a = 0.0;
    return next;
  }
  if (const auto* pw = std::get_if<PiecewiseConstantSpeed>(&kind)) {
    next.v = piecewise_speed_at(*pw, t_next);
    next.x = cur.x + eps.eps * next.v;
    next.a = (next.v - cur.v) / eps.eps;
    return next;
  }
  const auto sample = sampled_state_at(std::get<SampledTrajectory>(kind), t_next);
  next.x = sample.x;
  next.v = sample.v;
  next.a = (sample.v - cur.v) / eps.eps;
  return next;
}

LeaderProfile LeaderProfile::rebased(double x0) const {
  LeaderProfile out = *this;
  if (auto* st = std::get_if<Stationary>(&out.kind)) {
    st->x0 = x0;
  } else if (auto* pw = std::get_if<PiecewiseConstantSpeed>(&out.kind)) {
    pw->x0 = x0;
  } else {
    auto& tr = std::get<SampledTrajectory>(out.kind);
    const double shift = x0 - tr.samples.front().x;
    for (auto& s : tr.samples) s.x += shift;
  }
  return out;
}

std::string LeaderProfile::describe() const {
  std::ostringstream os;
  if (const auto* st = std::get_if<Stationary>(&kind)) {
    os << "stationary(x0=" << format_g9(st->x0) << ")";
  } else if (const auto* pw = std::get_if<PiecewiseConstantSpeed>(&kind)) {
    os << "piecewise-constant-speed(x0=" << format_g9(pw->x0) << ", segments=";
    os << pw->segments.size() << ")";
  } else {
    os << "sampled(" << std::get<SampledTrajectory>(kind).samples.size()
       << " samples)";
  }
  return os.str();
}

std::string_view clamp_policy_name(ClampPolicy policy) {
  switch (policy) {
    case ClampPolicy::None: return "none";
    case ClampPolicy::StopAtZeroSpeed: return "stop-at-zero-speed";
  }
  return "none";
}

std::optional<ClampPolicy> clamp_policy_from_name(std::string_view name) {
  if (name == "none") return ClampPolicy::None;
  if (name == "stop-at-zero-speed") return ClampPolicy::StopAtZeroSpeed;
  return std::nullopt;
}

void Scenario::validate() const {
  params.validate();
  leader.validate();
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw ConfigError("t_end must be finite and > 0");
  }
  if (!std::isfinite(follower0.x) || !std::isfinite(follower0.v)) {
    throw ConfigError("follower initial state must be finite");
  }
  if (!(follower0.x < leader.initial_state().x)) {
    throw ConfigError("follower must start behind the leader");
  }
  if (enforce_eps_precondition && is_newell_family(model) && eps.eps > params.tau) {
    throw ConfigError(
        "newell-family models require eps <= tau; set enforce_eps_precondition "
        "to false to run anyway");
  }
}

ViolationMask violation_bit(PrincipleId id) {
  return static_cast<ViolationMask>(1u << static_cast<unsigned>(id));
}

std::vector<PrincipleId> violations_from_mask(ViolationMask mask) {
  std::vector<PrincipleId> out;
  for (int i = 0; i < kPrincipleCount; ++i) {
    if (mask & (1u << static_cast<unsigned>(i))) {
      out.push_back(static_cast<PrincipleId>(i));
    }
  }
  return out;
}

double Trajectory::min_spacing() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : steps) m = std::min(m, s.state.spacing);
  return m;
}

double Trajectory::min_speed() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : steps) m = std::min(m, s.state.follower.v);
  return m;
}

double Trajectory::max_speed() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& s : steps) m = std::max(m, s.state.follower.v);
  return m;
}

double Trajectory::min_accel() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : steps) m = std::min(m, s.state.follower.a);
  return m;
}

long long step_count(double t_end, const StepSize& eps) {
  const double q = t_end / eps.eps;
  long long n = std::llround(q);
  if (std::abs(q - static_cast<double>(n)) > 1e-6) {
    n = static_cast<long long>(std::ceil(q));
  }
  return std::max<long long>(n, 1);
}

namespace {

ViolationMask step_violations(const PairState& cur, const PairState* prev,
                              const ModelParams& params) {
  ViolationMask mask = 0;
  if (!check_comfort_jam_spacing(cur, params))
    mask |= violation_bit(PrincipleId::ComfortJamSpacing);
  if (!check_minimum_jam_spacing(cur, params))
    mask |= violation_bit(PrincipleId::MinimumJamSpacing);
  if (!check_forward_traveling(cur.follower))
    mask |= violation_bit(PrincipleId::ForwardTraveling);
  if (!check_speed_limit(cur.follower.v, params))
    mask |= violation_bit(PrincipleId::SpeedLimit);
  if (prev != nullptr) {
    if (!check_min_time_gap(*prev, cur.follower.v, params))
      mask |= violation_bit(PrincipleId::MinimumTimeGap);
    if (!check_bounded_control(cur.follower.a, prev->follower.v, params))
      mask |= violation_bit(PrincipleId::BoundedControl);
  }
  return mask;
}

PhaseLabel safe_classify(ModelId model, const PairState& p, const ModelParams& params,
                         const StepSize& eps) {
  try {
    return classify(model, p, params, eps);
  } catch (const DomainError&) {
    return PhaseLabel::Unclassified;
  } catch (const PreconditionError&) {
    return PhaseLabel::Unclassified;
  }
}

}  // namespace

Trajectory run(const Scenario& sc) {
  sc.validate();

  Trajectory traj;
  traj.meta.model = sc.model;
  traj.meta.params = sc.params;
  traj.meta.eps = sc.eps;
  traj.meta.t_end = sc.t_end;
  traj.meta.clamp = sc.clamp;
  traj.meta.leader = sc.leader.describe();

  const long long n = step_count(sc.t_end, sc.eps);
  traj.steps.reserve(static_cast<std::size_t>(n) + 1);

  VehicleState follower = sc.follower0;
  follower.a = 0.0;  // acceleration is defined over the step just taken
  VehicleState leader = sc.leader.initial_state();
  PairState pair = make_pair_state(0.0, follower, leader, sc.params);
  traj.steps.push_back({pair, safe_classify(sc.model, pair, sc.params, sc.eps),
                        step_violations(pair, nullptr, sc.params)});

  for (long long k = 1; k <= n; ++k) {
    ModelOutput out;
    try {
      out = model_next(sc.model, pair, sc.params, sc.eps, sc.enforce_eps_precondition);
    } catch (const DomainError& e) {
      traj.failure = DomainFailure{pair.t, e.kind(), e.what()};
      break;
    }
    double v_next = out.v_next;
    if (sc.clamp == ClampPolicy::StopAtZeroSpeed && v_next < 0.0) v_next = 0.0;

    const PairState prev = pair;
    follower = step_from_speed(follower, v_next, sc.eps);
    leader = sc.leader.advance(leader, static_cast<double>(k) * sc.eps.eps, sc.eps);
    pair = make_pair_state(static_cast<double>(k) * sc.eps.eps, follower, leader,
                           sc.params);
    traj.steps.push_back({pair, safe_classify(sc.model, pair, sc.params, sc.eps),
                          step_violations(pair, &prev, sc.params)});
  }
  return traj;
}

std::vector<Trajectory> run_platoon(ModelId model, const ModelParams& params,
                                    const StepSize& eps,
                                    std::span<const VehicleState> initial,
                                    const LeaderProfile& lead, double t_end,
                                    ClampPolicy clamp) {
  params.validate();
  lead.validate();
  if (initial.empty()) throw ConfigError("platoon needs at least one follower");
  if (!(t_end > 0.0)) throw ConfigError("t_end must be > 0");

  VehicleState leader = lead.initial_state();
  double prev_x = leader.x;
  for (const auto& s : initial) {
    if (!(s.x < prev_x)) {
      throw ConfigError("platoon initial positions must strictly decrease");
    }
    prev_x = s.x;
  }

  const std::size_t m = initial.size();
  const long long n = step_count(t_end, eps);

  std::vector<Trajectory> trajs(m);
  for (std::size_t i = 0; i < m; ++i) {
    trajs[i].meta.model = model;
    trajs[i].meta.params = params;
    trajs[i].meta.eps = eps;
    trajs[i].meta.t_end = t_end;
    trajs[i].meta.clamp = clamp;
    trajs[i].meta.leader = i == 0 ? lead.describe()
                                  : "platoon-vehicle-" + std::to_string(i - 1);
    trajs[i].steps.reserve(static_cast<std::size_t>(n) + 1);
  }

  std::vector<VehicleState> states(initial.begin(), initial.end());
  for (auto& s : states) s.a = 0.0;

  std::vector<PairState> pairs(m);
  auto rebuild_pairs = [&](double t) {
    for (std::size_t i = 0; i < m; ++i) {
      pairs[i] = make_pair_state(t, states[i], i == 0 ? leader : states[i - 1], params);
    }
  };
  auto record = [&](const std::vector<PairState>* prev) {
    for (std::size_t i = 0; i < m; ++i) {
      trajs[i].steps.push_back(
          {pairs[i], safe_classify(model, pairs[i], params, eps),
           step_violations(pairs[i], prev ? &(*prev)[i] : nullptr, params)});
    }
  };

  rebuild_pairs(0.0);
  record(nullptr);

  std::vector<double> v_next(m);
  for (long long k = 1; k <= n; ++k) {
    // All spacings are read from the snapshot at t, then everyone steps.
    bool failed = false;
    for (std::size_t i = 0; i < m; ++i) {
      try {
        const ModelOutput out = model_next(model, pairs[i], params, eps);
        v_next[i] = out.v_next;
        if (clamp == ClampPolicy::StopAtZeroSpeed && v_next[i] < 0.0) v_next[i] = 0.0;
      } catch (const DomainError& e) {
        trajs[i].failure = DomainFailure{pairs[i].t, e.kind(), e.what()};
        failed = true;
      }
    }
    if (failed) break;  // the platoon is coupled; stop at the first failure

    const std::vector<PairState> prev = pairs;
    const double t = static_cast<double>(k) * eps.eps;
    leader = lead.advance(leader, t, eps);
    for (std::size_t i = 0; i < m; ++i) {
      states[i] = step_from_speed(states[i], v_next[i], eps);
    }
    rebuild_pairs(t);
    record(&prev);
  }
  return trajs;
}

std::optional<double> settle_time(const Trajectory& traj, double v_tol, double z_tol) {
  if (!(v_tol > 0.0) || !(z_tol > 0.0)) {
    throw ConfigError("settle tolerances must be > 0");
  }
  const auto& steps = traj.steps;
  const double zeta = traj.meta.params.zeta;
  auto settled = [&](const StepRecord& r) {
    return std::abs(r.state.follower.v) <= v_tol &&
           std::abs(r.state.spacing - zeta) <= z_tol;
  };
  std::size_t i = steps.size();
  while (i > 0 && settled(steps[i - 1])) --i;
  if (i == steps.size()) return std::nullopt;  // final state not settled
  if (i == 0) return steps.front().state.t;
  return steps[i].state.t;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, int stride) {
  if (stride < 1) throw ConfigError("csv stride must be >= 1");
  os << "t,x_f,v_f,a_f,x_l,v_l,z,phase,violations\n";
  const std::size_t n = traj.steps.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i % static_cast<std::size_t>(stride) != 0 && i != n - 1) continue;
    const auto& rec = traj.steps[i];
    const auto& s = rec.state;
    os << format_g9(s.t) << ',' << format_g9(s.follower.x) << ','
       << format_g9(s.follower.v) << ',' << format_g9(s.follower.a) << ','
       << format_g9(s.leader.x) << ',' << format_g9(s.leader.v) << ','
       << format_g9(s.spacing) << ',' << phase_name(rec.phase) << ',';
    bool first = true;
    for (PrincipleId id : violations_from_mask(rec.violations)) {
      if (!first) os << ';';
      os << principle_code(id);
      first = false;
    }
    os << '\n';
  }
}

}  // namespace carfollow
