#pragma once

#include <cmath>
#include <utility>

#include "uaav/errors.hpp"
#include "uaav/types.hpp"

namespace uaav {

/// Guard band around the roll singularity of the rate transform (rad).
inline constexpr double kDefaultSingularityGuard = 1e-3;

/// Body-to-earth rotation matrix for the ZXY sequence. Equals
/// Rz(psi) * Rx(phi) * Ry(theta); orthogonal, det +1 for all finite angles.
inline Mat3 rotation_body_to_earth(const EulerZXY& att) {
  const double cf = std::cos(att.phi), sf = std::sin(att.phi);
  const double ct = std::cos(att.theta), st = std::sin(att.theta);
  const double cp = std::cos(att.psi), sp = std::sin(att.psi);
  Mat3 R;
  R << ct * cp - sf * st * sp, -cf * sp, st * cp + sf * ct * sp,
       ct * sp + sf * st * cp,  cf * cp, st * sp - sf * ct * cp,
      -cf * st,                 sf,      cf * ct;
  return R;
}

inline Mat3 rotation_earth_to_body(const EulerZXY& att) {
  return rotation_body_to_earth(att).transpose();
}

/// Rate transform W with Thetadot = W * Omega. Throws SingularAttitude when
/// |phi| is within `guard` of pi/2; theta = +-pi/2 is well conditioned.
inline Mat3 angular_rate_transform(const EulerZXY& att,
                                   double guard = kDefaultSingularityGuard) {
  if (std::abs(att.phi) >= M_PI / 2.0 - guard) {
    throw SingularAttitude("angular_rate_transform: |phi| = " +
                           std::to_string(std::abs(att.phi)) +
                           " rad is inside the singularity guard band");
  }
  const double cf = std::cos(att.phi), tf = std::tan(att.phi);
  const double ct = std::cos(att.theta), st = std::sin(att.theta);
  Mat3 W;
  W << ct,           0.0, st,
       st * tf,      1.0, -ct * tf,
      -st / cf,      0.0, ct / cf;
  return W;
}

/// Kinematics: Pdot = R_B^E * V, Thetadot = W * Omega.
inline std::pair<Vec3, Vec3> kinematics_derivative(
    const RigidBodyState& state, double guard = kDefaultSingularityGuard) {
  const Vec3 pdot = rotation_body_to_earth(state.Theta) * state.V;
  const Vec3 thetadot = angular_rate_transform(state.Theta, guard) * state.Omega;
  return {pdot, thetadot};
}

}  // namespace uaav
