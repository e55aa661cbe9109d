#include "carfollow/oracles.hpp"

#include <cmath>
#include <string>

#include "carfollow/models.hpp"

namespace carfollow {

GippsBrakingSolution::GippsBrakingSolution(const ModelParams& params, double v0)
    : params_(params), v0_(v0) {
  params_.validate();
  if (!(v0 > 0.0) || v0 > params_.mu) {
    throw ConfigError("GippsBrakingSolution: v0 must lie in (0, mu]");
  }
  z0_ = params_.zeta + v0 * params_.tau_brake + v0 * v0 / (2.0 * params_.beta);
}

double GippsBrakingSolution::time_of_spacing(double z) const {
  if (z == z0_) return 0.0;
  if (!(z > params_.zeta) || z > z0_) {
    throw DomainError("domain",
                      "time_of_spacing: z must lie in (zeta, z0]; got " +
                          std::to_string(z));
  }
  const double beta = params_.beta;
  const double bt = beta * params_.tau_brake;
  const double root = std::sqrt(bt * bt + 2.0 * beta * (z - params_.zeta));
  return -root / beta -
         params_.tau_brake * std::log(std::abs((bt - root) / v0_)) +
         (v0_ + bt) / beta;
}

double GippsBrakingSolution::speed_of_spacing(double z) const {
  if (z < params_.zeta) {
    throw DomainError("domain", "speed_of_spacing: z must be >= zeta");
  }
  const double bt = params_.beta * params_.tau_brake;
  return -bt + std::sqrt(bt * bt + 2.0 * params_.beta * (z - params_.zeta));
}

double GippsBrakingSolution::accel_of_spacing(double z) const {
  if (z < params_.zeta) {
    throw DomainError("domain", "accel_of_spacing: z must be >= zeta");
  }
  const double beta = params_.beta;
  const double bt = beta * params_.tau_brake;
  return -beta + beta * bt / std::sqrt(bt * bt + 2.0 * beta * (z - params_.zeta));
}

std::string_view equilibrium_class_name(EquilibriumClass c) {
  switch (c) {
    case EquilibriumClass::StableSpiral: return "stable-spiral";
    case EquilibriumClass::StableNode: return "stable-node";
    case EquilibriumClass::Other: return "other";
  }
  return "other";
}

LinearizationResult idm_linearize(const ModelParams& params) {
  const double gap = params.zeta - params.zeta_min;
  if (!(gap > 0.0)) {
    throw DomainError("singular-input", "idm_linearize: zeta must exceed zeta_min");
  }
  const double scale = params.alpha / gap;

  LinearizationResult result;
  result.jacobian = {{{-2.0 * params.tau * scale, 2.0 * scale}, {-1.0, 0.0}}};

  const double disc = params.tau * params.tau - 2.0 * gap / params.alpha;
  if (disc < 0.0) {
    const double im = scale * std::sqrt(-disc);
    const double re = -params.tau * scale;
    result.eigenvalues = {std::complex<double>(re, im),
                          std::complex<double>(re, -im)};
    result.classification = re < 0.0 ? EquilibriumClass::StableSpiral
                                     : EquilibriumClass::Other;
  } else {
    const double root = std::sqrt(disc);
    const double l1 = scale * (-params.tau + root);
    const double l2 = scale * (-params.tau - root);
    result.eigenvalues = {std::complex<double>(l1, 0.0),
                          std::complex<double>(l2, 0.0)};
    result.classification = (l1 < 0.0 && l2 < 0.0) ? EquilibriumClass::StableNode
                                                   : EquilibriumClass::Other;
  }
  return result;
}

std::array<double, 2> idm_linear_rhs(const ModelParams& params, double v,
                                     double ztilde) {
  const double scale = params.alpha / (params.zeta - params.zeta_min);
  return {-2.0 * params.tau * scale * v + 2.0 * scale * ztilde, -v};
}

std::array<double, 2> idm_slvp_rhs(const ModelParams& params, double v,
                                   double ztilde) {
  VehicleState follower;
  follower.v = v;
  follower.x = -(ztilde + params.zeta);
  const VehicleState leader{};  // stationary at the origin
  const PairState p = make_pair_state(0.0, follower, leader, params);
  return {idm_accel(p, params), -v};
}

}  // namespace carfollow
