#pragma once

#include <string_view>
#include <vector>

#include "carfollow/models.hpp"

namespace carfollow {

enum class PhaseLabel : int {
  Unclassified = 0,
  BoundedAcceleration = 1,
  EquilibriumCruising = 2,
  EquilibriumAcceleration = 3,
  EquilibriumDeceleration = 4,
  BoundedDeceleration = 5,
  GippsAccelBranch = 6,
  GippsSafeBranch = 7,
};

std::string_view phase_name(PhaseLabel label);
int phase_code(PhaseLabel label);

/// Feasibility regions of the speed-spacing plane. Grey: zeta_min <= z < zeta
/// (comfort jam spacing violated, minimum jam spacing kept); black: z <
/// zeta_min; negative speeds are infeasible outright.
enum class RegionLabel : int {
  Feasible = 0,
  GreyComfortViolation = 1,
  BlackMinimumViolation = 2,
  InfeasibleNegativeSpeed = 3,
};

std::string_view region_name(RegionLabel label);
RegionLabel region_of(double v, double z, const ModelParams& params);

/// One steady-state point of a fundamental diagram; q = k*v.
struct FDPoint {
  double k;  ///< density [1/m]
  double v;  ///< speed [m/s]
  double q;  ///< flow [1/s]
};

/// Evenly spaced closed interval [lo, hi] with `count` points (count >= 1;
/// a single point sits at lo).
struct AxisSpec {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
  std::vector<double> values() const;
};

/// Phase of a state under the given model. Boundary ties resolve in the
/// order EquilibriumCruising > BoundedAcceleration > BoundedDeceleration >
/// EquilibriumAcceleration > EquilibriumDeceleration. IDM has no published
/// partition and returns Unclassified.
PhaseLabel classify(ModelId id, const PairState& p, const ModelParams& params,
                    const StepSize& eps);

/// All region definitions matching the state, before tie-breaking. Used by the
/// partition tests; classify() returns the highest-priority entry.
std::vector<PhaseLabel> classify_candidates(ModelId id, const PairState& p,
                                            const ModelParams& params,
                                            const StepSize& eps);

/// Sampled (dv/dt, dz/dt) field for the stationary lead-vehicle problem.
/// dv/dt uses the eps-dependent discrete acceleration of the model; dz/dt is
/// -v. Ill-defined grid points carry the flag and a NaN dv/dt.
struct FieldPoint {
  double v;
  double z;
  double dvdt;
  double dzdt;
  PhaseLabel phase;
  bool ill_defined;
};

std::vector<FieldPoint> vector_field(ModelId id, const ModelParams& params,
                                     const AxisSpec& v_axis, const AxisSpec& z_axis,
                                     const StepSize& eps);

/// zeta_c = mu*tau + zeta, where the two equilibrium branches meet.
double critical_spacing(const ModelParams& params);

/// Analytic steady-state fundamental diagram. Newell family:
/// v = min(mu, (1/k - 1/kappa)/tau); Gipps: tau_brake in place of tau.
/// Throws UnsupportedError for the IDM and ConfigError for densities outside
/// (0, kappa].
std::vector<FDPoint> fundamental_diagram(ModelId id, const ModelParams& params,
                                         const std::vector<double>& densities);

/// Empirical cross-check of fundamental_diagram: a short platoon is seeded at
/// spacing 1/k behind a leader moving at the analytic speed and the settled
/// tail speed is measured. Throws SearchError when no steady state emerges.
FDPoint fd_from_simulation(ModelId id, const ModelParams& params, double k,
                           const StepSize& eps, double t_end = 40.0);

}  // namespace carfollow
