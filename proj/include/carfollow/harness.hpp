#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "carfollow/phase.hpp"
#include "carfollow/sim.hpp"

namespace carfollow {

/// Grid of initial conditions for a principle-compliance sweep. Leader
/// position is derived from the z0 axis per cell (the given profile is
/// rebased); follower starts at x = 0 with the cell's v0.
struct SweepSpec {
  ModelId model = ModelId::Newell;
  ModelParams params{};
  StepSize eps{1e-3};
  AxisSpec v0;
  AxisSpec z0;
  LeaderProfile leader = LeaderProfile::stationary(0.0);
  double t_end = 60.0;
  std::set<PrincipleId> principles = zeroth_and_first_order_principles();
  ClampPolicy clamp = ClampPolicy::None;
  int jobs = 1;

  void validate() const;
};

enum class CellStatus : int {
  Simulated = 0,
  DomainExcluded = 1,  // initial state outside the model's domain; not run
  DomainFailure = 2,   // run truncated by a model-domain error
};

std::string_view cell_status_name(CellStatus status);

struct CellResult {
  int iv = 0;
  int iz = 0;
  double v0 = 0.0;
  double z0 = 0.0;
  CellStatus status = CellStatus::Simulated;
  std::string note;
  RegionLabel initial_region = RegionLabel::Feasible;
  ComplianceReport audit;
  PairState terminal;
};

struct SweepReport {
  SweepSpec spec;
  std::string build_id;
  std::vector<CellResult> cells;  // row-major over (iz, iv), index order fixed
  int simulated_cells = 0;
  int excluded_cells = 0;
  int failed_cells = 0;
  std::map<PrincipleId, int> pass_counts;  // over simulated cells

  double pass_rate(PrincipleId id) const;
};

/// One simulation + audit per grid cell. Cells whose initial state a model
/// precondition excludes (IDM with z0 <= zeta_min) are marked, not run.
/// Cells are independent; spec.jobs > 1 evaluates them on a small thread
/// pool with a deterministic, index-ordered reduction.
SweepReport sweep(const SweepSpec& spec);

struct MinBetaResult {
  double beta;         // bisection threshold from simulation
  double closed_form;  // v0/(2*tau)
  int iterations;
  double bracket_width;
};

/// Smallest deceleration bound keeping the BDA-Newell model comfort-jam-
/// spacing compliant in the SLVP started at (v0, z0 = tau*v0 + zeta),
/// located by bisection on the simulated minimum spacing.
MinBetaResult min_beta_for_compliance(const ModelParams& params, double v0,
                                      const StepSize& eps,
                                      double spacing_tol = 1e-3,
                                      int max_iterations = 40);

struct Finding {
  std::string name;
  double observed = 0.0;
  std::string expected;  // human-readable bound or window
  bool passed = false;
  bool asserted = true;  // informational findings are recorded but not gating
};

/// Everything one replication experiment produces: the primary trajectory,
/// optional companion runs, and the findings checked against it.
struct ReplicationBundle {
  std::string name;
  ModelId model = ModelId::Newell;
  ModelParams params{};
  StepSize eps{1e-3};
  Trajectory primary;
  std::vector<std::pair<std::string, Trajectory>> companions;
  std::vector<Finding> findings;
  int csv_stride = 1;

  bool all_asserted_passed() const;
};

std::vector<std::string> replication_names();

/// Runs one of the named experiments (ba-newell-slvp, bda-newell-collision,
/// idm-fig2, gipps-fig2) at its frozen configuration. Throws ConfigError for
/// unknown names.
ReplicationBundle replicate(const std::string& name);

/// Writes trajectory CSVs, a phase map + legend (when the model has a
/// partition), a vector field CSV, and findings.json into dir.
void write_bundle(const ReplicationBundle& bundle, const std::string& dir,
                  bool include_timestamp = true);

}  // namespace carfollow
