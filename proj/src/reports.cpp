#include "carfollow/reports.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <ostream>

#include "carfollow/io.hpp"
#include "carfollow/version.hpp"

namespace carfollow {

namespace {

using nlohmann::ordered_json;

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json violation_to_json(const Violation& v) {
  return ordered_json{{"principle", principle_name(v.principle)},
                      {"t", v.t},
                      {"observed", v.observed},
                      {"bound", v.bound}};
}

ordered_json pair_state_to_json(const PairState& p) {
  return ordered_json{{"t", p.t},
                      {"x_f", p.follower.x},
                      {"v_f", p.follower.v},
                      {"a_f", p.follower.a},
                      {"x_l", p.leader.x},
                      {"v_l", p.leader.v},
                      {"z", p.spacing}};
}

}  // namespace

ordered_json params_to_json(const ModelParams& p) {
  return ordered_json{{"zeta", p.zeta},
                      {"zeta_min", p.zeta_min},
                      {"tau", p.tau},
                      {"tau_brake", p.tau_brake},
                      {"mu", p.mu},
                      {"alpha", p.alpha},
                      {"beta", p.beta},
                      {"delta", p.delta},
                      {"tau1", p.tau1},
                      {"alpha_gipps", p.alpha_gipps}};
}

ordered_json compliance_to_json(const ComplianceReport& report) {
  ordered_json principles = ordered_json::object();
  for (const auto& [id, result] : report.results) {
    ordered_json entry{{"passed", result.passed}};
    if (result.first_violation) {
      entry["first_violation"] = violation_to_json(*result.first_violation);
    }
    principles[std::string(principle_name(id))] = entry;
  }
  ordered_json out{{"principles", principles}, {"all_passed", report.all_passed()}};
  if (report.braking_onset) {
    out["braking_onset"] = ordered_json{{"t", report.braking_onset->t},
                                        {"spacing", report.braking_onset->spacing},
                                        {"speed", report.braking_onset->speed},
                                        {"ssd", report.ssd_at_onset},
                                        {"factor", report.ssd_factor}};
  }
  return out;
}

ordered_json sweep_report_to_json(const SweepReport& report, bool include_timestamp) {
  const auto& spec = report.spec;
  ordered_json principles = ordered_json::array();
  for (PrincipleId id : spec.principles) {
    principles.push_back(std::string(principle_name(id)));
  }

  ordered_json meta{{"schema_version", 1},
                    {"kind", "sweep-report"},
                    {"model", model_key(spec.model)},
                    {"params", params_to_json(spec.params)},
                    {"eps", spec.eps.eps},
                    {"t_end", spec.t_end},
                    {"clamp_policy", clamp_policy_name(spec.clamp)},
                    {"principles", principles},
                    {"leader", spec.leader.describe()},
                    {"jobs", spec.jobs},
                    {"build", report.build_id}};
  if (include_timestamp) meta["timestamp"] = utc_timestamp();

  ordered_json cells = ordered_json::array();
  for (const auto& cell : report.cells) {
    ordered_json c{{"iv", cell.iv},
                   {"iz", cell.iz},
                   {"v0", cell.v0},
                   {"z0", cell.z0},
                   {"status", cell_status_name(cell.status)},
                   {"initial_region", region_name(cell.initial_region)}};
    if (!cell.note.empty()) c["note"] = cell.note;
    if (cell.status != CellStatus::DomainExcluded) {
      c["audit"] = compliance_to_json(cell.audit);
      c["terminal"] = pair_state_to_json(cell.terminal);
    }
    cells.push_back(c);
  }

  ordered_json pass_rates = ordered_json::object();
  ordered_json pass_counts = ordered_json::object();
  for (const auto& [id, count] : report.pass_counts) {
    pass_counts[std::string(principle_name(id))] = count;
    pass_rates[std::string(principle_name(id))] = report.pass_rate(id);
  }

  return ordered_json{
      {"meta", meta},
      {"grid", ordered_json{{"v0", spec.v0.values()}, {"z0", spec.z0.values()}}},
      {"cells", cells},
      {"aggregates", ordered_json{{"simulated_cells", report.simulated_cells},
                                  {"excluded_cells", report.excluded_cells},
                                  {"failed_cells", report.failed_cells},
                                  {"pass_counts", pass_counts},
                                  {"pass_rates", pass_rates}}},
      {"findings", ordered_json::array()}};
}

ordered_json findings_to_json(const ReplicationBundle& bundle, bool include_timestamp) {
  ordered_json meta{{"schema_version", 1},
                    {"kind", "replication-findings"},
                    {"experiment", bundle.name},
                    {"model", model_key(bundle.model)},
                    {"params", params_to_json(bundle.params)},
                    {"eps", bundle.eps.eps},
                    {"csv_stride", bundle.csv_stride},
                    {"build", kBuildId}};
  if (include_timestamp) meta["timestamp"] = utc_timestamp();

  ordered_json findings = ordered_json::array();
  for (const auto& f : bundle.findings) {
    findings.push_back(ordered_json{{"name", f.name},
                                    {"observed", f.observed},
                                    {"expected", f.expected},
                                    {"passed", f.passed},
                                    {"asserted", f.asserted}});
  }
  return ordered_json{{"meta", meta},
                      {"findings", findings},
                      {"all_asserted_passed", bundle.all_asserted_passed()}};
}

ordered_json linearization_to_json(const LinearizationResult& result) {
  ordered_json eigenvalues = ordered_json::array();
  for (const auto& ev : result.eigenvalues) {
    eigenvalues.push_back(ordered_json{{"re", ev.real()}, {"im", ev.imag()}});
  }
  return ordered_json{
      {"jacobian", ordered_json::array(
                       {ordered_json::array(
                            {result.jacobian[0][0], result.jacobian[0][1]}),
                        ordered_json::array(
                            {result.jacobian[1][0], result.jacobian[1][1]})})},
      {"eigenvalues", eigenvalues},
      {"classification", equilibrium_class_name(result.classification)}};
}

void write_vector_field_csv(std::ostream& os, const std::vector<FieldPoint>& field) {
  os << "v,z,dvdt,dzdt,phase\n";
  for (const auto& fp : field) {
    os << format_g9(fp.v) << ',' << format_g9(fp.z) << ',' << format_g9(fp.dvdt)
       << ',' << format_g9(fp.dzdt) << ','
       << (fp.ill_defined ? std::string_view("ill-defined") : phase_name(fp.phase))
       << '\n';
  }
}

void write_fd_csv(std::ostream& os, const std::vector<FDPoint>& points) {
  os << "k,v,q\n";
  for (const auto& p : points) {
    os << format_g9(p.k) << ',' << format_g9(p.v) << ',' << format_g9(p.q) << '\n';
  }
}

void write_phase_map_csv(std::ostream& os, const std::vector<FieldPoint>& field) {
  os << "v,z,phase_code\n";
  for (const auto& fp : field) {
    os << format_g9(fp.v) << ',' << format_g9(fp.z) << ','
       << (fp.ill_defined ? -1 : phase_code(fp.phase)) << '\n';
  }
}

ordered_json phase_legend_json() {
  ordered_json legend = ordered_json::object();
  legend["-1"] = "ill-defined";
  for (PhaseLabel label :
       {PhaseLabel::Unclassified, PhaseLabel::BoundedAcceleration,
        PhaseLabel::EquilibriumCruising, PhaseLabel::EquilibriumAcceleration,
        PhaseLabel::EquilibriumDeceleration, PhaseLabel::BoundedDeceleration,
        PhaseLabel::GippsAccelBranch, PhaseLabel::GippsSafeBranch}) {
    legend[std::to_string(phase_code(label))] = phase_name(label);
  }
  return legend;
}

}  // namespace carfollow
