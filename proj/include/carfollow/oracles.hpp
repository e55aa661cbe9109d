#pragma once

#include <array>
#include <complex>
#include <string_view>

#include "carfollow/core.hpp"

namespace carfollow {

/// Closed-form descent of the simplified Gipps model toward a stationary
/// leader, starting on the safe-stopping-distance curve:
/// z0 = zeta + v0*tau' + v0^2/(2*beta). Ground truth for validating simulated
/// braking trajectories.
class GippsBrakingSolution {
 public:
  GippsBrakingSolution(const ModelParams& params, double v0);

  double v0() const { return v0_; }
  double z0() const { return z0_; }
  const ModelParams& params() const { return params_; }

  /// t(z) on (zeta, z0]; t(z0) = 0 and t diverges as z -> zeta+.
  double time_of_spacing(double z) const;
  /// v(z) = -beta*tau' + sqrt(beta^2*tau'^2 + 2*beta*(z - zeta)), z >= zeta.
  double speed_of_spacing(double z) const;
  /// a(z) = -beta + beta^2*tau'/sqrt(...), always within [-beta, 0].
  double accel_of_spacing(double z) const;

 private:
  ModelParams params_;
  double v0_;
  double z0_;
};

inline double gipps_time_of_spacing(const GippsBrakingSolution& sol, double z) {
  return sol.time_of_spacing(z);
}
inline double gipps_speed_of_spacing(const GippsBrakingSolution& sol, double z) {
  return sol.speed_of_spacing(z);
}
inline double gipps_accel_of_spacing(const GippsBrakingSolution& sol, double z) {
  return sol.accel_of_spacing(z);
}

enum class EquilibriumClass : int {
  StableSpiral = 0,
  StableNode = 1,
  Other = 2,
};

std::string_view equilibrium_class_name(EquilibriumClass c);

/// Linearization of the IDM stationary-lead-vehicle system about the stopped
/// equilibrium (v, z~) = (0, 0).
struct LinearizationResult {
  std::array<std::array<double, 2>, 2> jacobian;
  std::array<std::complex<double>, 2> eigenvalues;
  EquilibriumClass classification;
};

/// J = [[-2*tau*alpha/(zeta-zeta'), 2*alpha/(zeta-zeta')], [-1, 0]] with
/// closed-form eigenvalues lambda = alpha/(zeta-zeta') * (-tau +-
/// sqrt(tau^2 - 2(zeta-zeta')/alpha)).
LinearizationResult idm_linearize(const ModelParams& params);

/// Right side of the linearized system at (v, z~).
std::array<double, 2> idm_linear_rhs(const ModelParams& params, double v, double ztilde);

/// Right side of the full nonlinear SLVP system at (v, z~); used for the
/// Taylor-remainder cross-check of the linearization.
std::array<double, 2> idm_slvp_rhs(const ModelParams& params, double v, double ztilde);

}  // namespace carfollow
