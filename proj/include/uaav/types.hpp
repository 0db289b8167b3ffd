#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace uaav {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// ZXY Euler attitude: yaw psi about z, then roll phi about the new x,
/// then pitch theta about the new y. Singular at phi = +-pi/2.
struct EulerZXY {
  double phi{0.0};    // roll  (rad)
  double theta{0.0};  // pitch (rad)
  double psi{0.0};    // yaw   (rad)
};

/// Rigid-body state: position/attitude in the inertial frame (z up),
/// velocity and angular rate in the body frame.
struct RigidBodyState {
  Vec3 P{Vec3::Zero()};      // position in {E} (m)
  EulerZXY Theta;            // attitude
  Vec3 V{Vec3::Zero()};      // linear velocity in {B} (m/s)
  Vec3 Omega{Vec3::Zero()};  // angular rate in {B} (rad/s)
};

/// Force/moment pair in the body frame.
struct Wrench {
  Vec3 F{Vec3::Zero()};  // N
  Vec3 M{Vec3::Zero()};  // N*m

  Wrench& operator+=(const Wrench& o) {
    F += o.F;
    M += o.M;
    return *this;
  }
};

inline Wrench operator+(Wrench a, const Wrench& b) { return a += b; }

/// Wrap an angle to (-pi, pi]. Internal state is kept unwrapped; this is
/// applied at output/logging only.
inline double wrap_pi(double x) {
  double y = std::fmod(x + M_PI, 2.0 * M_PI);
  if (y <= 0.0) y += 2.0 * M_PI;
  return y - M_PI;
}

inline bool all_finite(const Vec3& v) {
  return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

inline bool finite(const RigidBodyState& s) {
  return all_finite(s.P) && all_finite(s.V) && all_finite(s.Omega) &&
         std::isfinite(s.Theta.phi) && std::isfinite(s.Theta.theta) &&
         std::isfinite(s.Theta.psi);
}

}  // namespace uaav
