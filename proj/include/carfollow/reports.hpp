#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "carfollow/harness.hpp"
#include "carfollow/oracles.hpp"

namespace carfollow {

nlohmann::ordered_json params_to_json(const ModelParams& params);
nlohmann::ordered_json compliance_to_json(const ComplianceReport& report);
nlohmann::ordered_json sweep_report_to_json(const SweepReport& report,
                                            bool include_timestamp = true);
nlohmann::ordered_json findings_to_json(const ReplicationBundle& bundle,
                                        bool include_timestamp = true);
nlohmann::ordered_json linearization_to_json(const LinearizationResult& result);

void write_vector_field_csv(std::ostream& os, const std::vector<FieldPoint>& field);
void write_fd_csv(std::ostream& os, const std::vector<FDPoint>& points);
/// Long-form grid v,z,phase_code; the legend maps codes to names.
void write_phase_map_csv(std::ostream& os, const std::vector<FieldPoint>& field);
nlohmann::ordered_json phase_legend_json();

}  // namespace carfollow
