#include "uaav/spatial.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace uaav;

namespace {

void expect_matrix_near(const Mat3& a, const Mat3& b, double tol) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      EXPECT_NEAR(a(i, j), b(i, j), tol) << "entry (" << i << "," << j << ")";
}

std::mt19937 rng(42u);

EulerZXY random_attitude(double roll_range = 1.35) {
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  std::uniform_real_distribution<double> roll(-roll_range, roll_range);
  return {roll(rng), angle(rng), angle(rng)};
}

}  // namespace

TEST(RotationBodyToEarth, ZeroAnglesGiveIdentity) {
  expect_matrix_near(rotation_body_to_earth({0, 0, 0}), Mat3::Identity(), 0.0);
}

TEST(RotationBodyToEarth, PurePitchNinetyDegrees) {
  Mat3 expected;
  expected << 0, 0, 1, 0, 1, 0, -1, 0, 0;
  expect_matrix_near(rotation_body_to_earth({0, M_PI / 2, 0}), expected, 1e-15);
}

TEST(RotationBodyToEarth, OrthogonalProperOverRandomAttitudes) {
  for (int i = 0; i < 100; ++i) {
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    const EulerZXY att{angle(rng), angle(rng), angle(rng)};
    const Mat3 R = rotation_body_to_earth(att);
    EXPECT_LT((R * R.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff(),
              1e-12);
    EXPECT_NEAR(R.determinant(), 1.0, 1e-12);
  }
}

TEST(RotationBodyToEarth, MatchesElementaryComposition) {
  for (int i = 0; i < 200; ++i) {
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    const EulerZXY att{angle(rng), angle(rng), angle(rng)};
    expect_matrix_near(rotation_body_to_earth(att),
                       oracle::composed_rotation(att), 1e-14);
  }
}

TEST(RotationBodyToEarth, MatchesQuaternionDcm) {
  for (int i = 0; i < 200; ++i) {
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    const EulerZXY att{angle(rng), angle(rng), angle(rng)};
    expect_matrix_near(rotation_body_to_earth(att),
                       oracle::quat_zxy(att).toRotationMatrix(), 1e-13);
  }
}

TEST(RotationEarthToBody, IsInverse) {
  expect_matrix_near(rotation_earth_to_body({0, 0, 0}), Mat3::Identity(), 0.0);
  for (int i = 0; i < 100; ++i) {
    const EulerZXY att = random_attitude(M_PI);
    const Mat3 prod =
        rotation_earth_to_body(att) * rotation_body_to_earth(att);
    expect_matrix_near(prod, Mat3::Identity(), 1e-12);
  }
}

TEST(RotationEarthToBody, PurePitchIsTranspose) {
  Mat3 expected;
  expected << 0, 0, -1, 0, 1, 0, 1, 0, 0;
  expect_matrix_near(rotation_earth_to_body({0, M_PI / 2, 0}), expected, 1e-15);
}

TEST(AngularRateTransform, ZeroAnglesGiveIdentity) {
  expect_matrix_near(angular_rate_transform({0, 0, 0}), Mat3::Identity(), 0.0);
}

TEST(AngularRateTransform, WellConditionedAtPitchNinety) {
  // the singularity sits on roll, not pitch
  Mat3 expected;
  expected << 0, 0, 1, 0, 1, 0, -1, 0, 0;
  expect_matrix_near(angular_rate_transform({0, M_PI / 2, 0.7}), expected,
                     1e-15);
}

TEST(AngularRateTransform, ThrowsInsideGuardBand) {
  EXPECT_THROW(angular_rate_transform({M_PI / 2 - 1e-9, 0, 0}),
               SingularAttitude);
  EXPECT_THROW(angular_rate_transform({-M_PI / 2 + 1e-9, 0, 0}),
               SingularAttitude);
  // custom guard bands move the boundary
  EXPECT_NO_THROW(angular_rate_transform({M_PI / 2 - 1e-9, 0, 0}, 1e-10));
}

TEST(AngularRateTransform, FiniteNearGuardForAllPitch) {
  for (int i = 0; i < 100; ++i) {
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    const EulerZXY att{M_PI / 2 - 2e-3, angle(rng), angle(rng)};
    const Mat3 W = angular_rate_transform(att);
    EXPECT_TRUE(W.allFinite());
  }
}

TEST(AngularRateTransform, InvertsAnalyticRateMap) {
  for (int i = 0; i < 1000; ++i) {
    const EulerZXY att = random_attitude();
    const Mat3 W = angular_rate_transform(att);
    const Mat3 B = oracle::euler_rate_to_body(att);
    expect_matrix_near(W * B, Mat3::Identity(), 1e-12);
  }
}

TEST(KinematicsDerivative, RestGivesZero) {
  RigidBodyState s;
  const auto [pdot, thetadot] = kinematics_derivative(s);
  EXPECT_EQ(pdot, Vec3::Zero());
  EXPECT_EQ(thetadot, Vec3::Zero());
}

TEST(KinematicsDerivative, IdentityAttitudePassesVelocityThrough) {
  RigidBodyState s;
  s.V = Vec3(1, 0, 0);
  const auto [pdot, thetadot] = kinematics_derivative(s);
  EXPECT_NEAR((pdot - Vec3(1, 0, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR(thetadot.norm(), 0.0, 1e-15);
}

TEST(KinematicsDerivative, MatchesQuaternionOracleDerivative) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    RigidBodyState s;
    s.Theta = random_attitude();
    s.V = Vec3(unit(rng), unit(rng), unit(rng)) * 3.0;
    s.Omega = Vec3(unit(rng), unit(rng), unit(rng)) * 2.0;
    const auto [pdot, thetadot] = kinematics_derivative(s);

    const Vec3 pdot_ref = oracle::quat_zxy(s.Theta) * s.V;
    const Vec3 thetadot_ref =
        oracle::euler_rate_to_body(s.Theta).inverse() * s.Omega;
    const double scale = std::max(1.0, thetadot_ref.norm());
    EXPECT_LT((pdot - pdot_ref).norm() / std::max(1.0, pdot_ref.norm()), 1e-9);
    EXPECT_LT((thetadot - thetadot_ref).norm() / scale, 1e-9);
  }
}

TEST(KinematicsDerivative, MatchesQuaternionFiniteDifference) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double dt = 1e-4;
  for (int i = 0; i < 50; ++i) {
    RigidBodyState s;
    s.Theta = random_attitude(1.0);
    s.Omega = Vec3(unit(rng), unit(rng), unit(rng)) * 2.0;
    const auto [pdot, thetadot] = kinematics_derivative(s);

    // central difference through a quaternion-propagated attitude
    auto euler_at = [&](double h) {
      Eigen::Quaterniond q = oracle::quat_zxy(s.Theta);
      const Vec3 dphi = s.Omega * h;
      Eigen::Quaterniond dq(Eigen::AngleAxisd(dphi.norm(),
                                              dphi.norm() > 0
                                                  ? Vec3(dphi.normalized())
                                                  : Vec3::UnitX()));
      return oracle::euler_from_matrix((q * dq).toRotationMatrix());
    };
    const EulerZXY plus = euler_at(dt / 2), minus = euler_at(-dt / 2);
    const Vec3 fd((plus.phi - minus.phi) / dt, (plus.theta - minus.theta) / dt,
                  (plus.psi - minus.psi) / dt);
    EXPECT_LT((thetadot - fd).norm(), 1e-6) << "sample " << i;
    (void)pdot;
  }
}

TEST(KinematicsDerivative, PropagatesSingularAttitude) {
  RigidBodyState s;
  s.Theta.phi = M_PI / 2 - 1e-6;
  s.Omega = Vec3(0.1, 0, 0);
  EXPECT_THROW(kinematics_derivative(s), SingularAttitude);
}

TEST(WrapPi, MapsToHalfOpenInterval) {
  EXPECT_DOUBLE_EQ(wrap_pi(0.0), 0.0);
  EXPECT_DOUBLE_EQ(wrap_pi(M_PI), M_PI);
  EXPECT_DOUBLE_EQ(wrap_pi(-M_PI), M_PI);
  EXPECT_NEAR(wrap_pi(3 * M_PI + 0.1), -M_PI + 0.1, 1e-12);
  EXPECT_NEAR(wrap_pi(-7.0), -7.0 + 2 * M_PI, 1e-12);
}
