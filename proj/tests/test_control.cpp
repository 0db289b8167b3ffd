#include "uaav/control.hpp"

#include <gtest/gtest.h>

#include <random>

#include "uaav/sim.hpp"

using namespace uaav;

namespace {

std::mt19937 rng(11u);

const VehicleParams kVehicle;
const RotorParams kRotor;
const MediumContext kAir = MediumContext::air();

double total_thrust(const RotorCommand& cmd, const RotorParams& rp,
                    const MediumContext& medium) {
  return rotor_thrust(cmd.omega1, rp, medium, 0).first +
         rotor_thrust(cmd.omega2, rp, medium, 1).first;
}

}  // namespace

TEST(CascadedPid, ZeroErrorGivesHoverTrim) {
  CascadedPidController ctl;
  RigidBodyState s;
  s.P = Vec3(1.0, 2.0, 5.0);
  const ActuatorCommand cmd =
      ctl.step(s.P, 0.0, s, 1e-3, kVehicle, kRotor, kAir,
               ControlMode::VerticalFlight);
  EXPECT_NEAR(cmd.rotor.gamma1, M_PI / 2, 1e-9);
  EXPECT_NEAR(cmd.rotor.gamma2, M_PI / 2, 1e-9);
  EXPECT_NEAR(total_thrust(cmd.rotor, kRotor, kAir), kVehicle.weight(), 1e-6);
}

TEST(CascadedPid, ZeroGainsAlwaysOutputTrim) {
  PidGains gains;
  for (int i = 0; i < 3; ++i) {
    gains.pos[i] = {0, 0, 0};
    gains.vel[i] = {0, 0, 0};
  }
  gains.roll_kp = gains.roll_kd = gains.yaw_kp = gains.yaw_kd = 0.0;
  CascadedPidController ctl(gains);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    RigidBodyState s;
    s.P = Vec3(unit(rng), unit(rng), unit(rng)) * 10.0;
    s.V = Vec3(unit(rng), unit(rng), unit(rng));
    const ActuatorCommand cmd =
        ctl.step(Vec3::Zero(), 0.0, s, 1e-3, kVehicle, kRotor, kAir,
                 ControlMode::VerticalFlight);
    EXPECT_NEAR(cmd.rotor.gamma1, M_PI / 2, 1e-12);
    EXPECT_NEAR(total_thrust(cmd.rotor, kRotor, kAir), kVehicle.weight(),
                1e-9);
  }
}

TEST(CascadedPid, ClimbErrorRaisesThrustMonotonically) {
  double prev = 0.0;
  for (double err : {0.0, 0.2, 0.5, 1.0, 3.0, 10.0, 100.0}) {
    CascadedPidController ctl;  // fresh integrators each step
    RigidBodyState s;
    const ActuatorCommand cmd =
        ctl.step(Vec3(0, 0, err), 0.0, s, 1e-3, kVehicle, kRotor, kAir,
                 ControlMode::VerticalFlight);
    const double thrust = total_thrust(cmd.rotor, kRotor, kAir);
    EXPECT_GE(thrust, prev - 1e-9) << "error " << err;
    EXPECT_LE(thrust, 31.6 + 1e-9);
    prev = thrust;
  }
  EXPECT_GT(prev, kVehicle.weight());
}

TEST(CascadedPid, CommandsStayWithinLimitsUnderFuzz) {
  CascadedPidController ctl;
  std::uniform_real_distribution<double> big(-1e3, 1e3);
  std::uniform_real_distribution<double> angle(-1.2, 1.2);
  for (int i = 0; i < 500; ++i) {
    RigidBodyState s;
    s.P = Vec3(big(rng), big(rng), big(rng));
    s.V = Vec3(big(rng), big(rng), big(rng)) / 100.0;
    s.Theta = {angle(rng), angle(rng), angle(rng)};
    s.Omega = Vec3(big(rng), big(rng), big(rng)) / 100.0;
    const ActuatorCommand cmd =
        ctl.step(Vec3(big(rng), big(rng), big(rng)), 0.0, s, 1e-3, kVehicle,
                 kRotor, kAir, ControlMode::VerticalFlight);
    EXPECT_NO_THROW(check_rotor_command(cmd.rotor, kRotor));
  }
}

TEST(CascadedPid, HoverHoldConvergesInsideTenSeconds) {
  // the climb axis is the controlled one; the tilt range cannot push
  // backwards, so station keeping starts above/below the target
  ScenarioConfig cfg;
  cfg.duration = 10.0;
  cfg.record_stride = 100;
  cfg.initial.P = Vec3(0.0, 0.0, 1.6);
  cfg.target_schedule.entries = {{0.0, Vec3(0.0, 0.0, 2.0)}};
  cfg.mode_schedule.entries = {{0.0, ControlMode::VerticalFlight}};
  const TrajectoryRecord rec = run_scenario(cfg);
  const TrajectorySample& last = rec.samples.back();
  EXPECT_LT((last.P - Vec3(0.0, 0.0, 2.0)).norm(), 0.05);
}

TEST(VectoredMix, ZeroInputIsIdle) {
  const ActuatorCommand cmd = vectored_mix(PilotInput{}, kRotor);
  EXPECT_DOUBLE_EQ(cmd.rotor.omega1, 0.0);
  EXPECT_DOUBLE_EQ(cmd.rotor.omega2, 0.0);
  EXPECT_DOUBLE_EQ(cmd.rotor.gamma1, 0.0);
  EXPECT_DOUBLE_EQ(cmd.rotor.gamma2, 0.0);
  EXPECT_EQ(cmd.mode, ControlMode::UnderwaterVectored);
}

TEST(VectoredMix, YawMakesSpeedDifferential) {
  PilotInput pilot;
  pilot.throttle = 0.5;
  for (double yaw : {-0.8, -0.3, 0.2, 0.6}) {
    pilot.yaw = yaw;
    const ActuatorCommand cmd = vectored_mix(pilot, kRotor);
    const MixerParams mix;
    EXPECT_NEAR(cmd.rotor.omega2 - cmd.rotor.omega1,
                2.0 * yaw * mix.yaw_scale * kRotor.omega_max, 1e-9);
  }
}

TEST(VectoredMix, MirroredRollMirrorsTiltDifferential) {
  PilotInput pilot;
  pilot.throttle = 0.4;
  pilot.pitch = 0.3;
  pilot.roll = 0.5;
  const ActuatorCommand a = vectored_mix(pilot, kRotor);
  pilot.roll = -0.5;
  const ActuatorCommand b = vectored_mix(pilot, kRotor);
  EXPECT_NEAR(a.rotor.gamma1 - a.rotor.gamma2,
              -(b.rotor.gamma1 - b.rotor.gamma2), 1e-12);
  EXPECT_NEAR(a.rotor.gamma1 + a.rotor.gamma2, b.rotor.gamma1 + b.rotor.gamma2,
              1e-12);
}

TEST(VectoredMix, AffineInsideUnsaturatedRegion) {
  const ActuatorCommand trim = vectored_mix(PilotInput{}, kRotor);
  PilotInput u;
  u.throttle = 0.6;
  u.roll = 0.2;
  u.pitch = 0.4;
  u.yaw = 0.1;
  const ActuatorCommand full = vectored_mix(u, kRotor);
  for (double a : {0.25, 0.5, 0.75}) {
    PilotInput scaled;
    scaled.throttle = a * u.throttle;
    scaled.roll = a * u.roll;
    scaled.pitch = a * u.pitch;
    scaled.yaw = a * u.yaw;
    const ActuatorCommand mix = vectored_mix(scaled, kRotor);
    EXPECT_NEAR(mix.rotor.omega1,
                trim.rotor.omega1 + a * (full.rotor.omega1 - trim.rotor.omega1),
                1e-12);
    EXPECT_NEAR(mix.rotor.gamma1,
                trim.rotor.gamma1 + a * (full.rotor.gamma1 - trim.rotor.gamma1),
                1e-12);
    EXPECT_NEAR(mix.rotor.gamma2,
                trim.rotor.gamma2 + a * (full.rotor.gamma2 - trim.rotor.gamma2),
                1e-12);
  }
}

TEST(VectoredMix, RejectsOutOfRangeInput) {
  PilotInput pilot;
  pilot.throttle = 1.5;
  EXPECT_THROW(vectored_mix(pilot, kRotor), InputOutOfRange);
  pilot.throttle = 0.0;
  pilot.yaw = -1.01;
  EXPECT_THROW(vectored_mix(pilot, kRotor), InputOutOfRange);
}

TEST(VectoredMix, OutputsSaturateUnderFuzz) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    PilotInput pilot{unit(rng), unit(rng), unit(rng), unit(rng)};
    const ActuatorCommand cmd = vectored_mix(pilot, kRotor);
    EXPECT_NO_THROW(check_rotor_command(cmd.rotor, kRotor));
  }
}

TEST(ModeSupervisor, FollowsScheduleInMatchingMedium) {
  ModeSupervisor sup;
  EXPECT_EQ(sup.step(ControlMode::HorizontalFlight, MediumContext::air()),
            ControlMode::HorizontalFlight);
  EXPECT_EQ(sup.step(ControlMode::VerticalFlight, MediumContext::air()),
            ControlMode::VerticalFlight);
}

TEST(ModeSupervisor, WaterModeInAirIsIllegal) {
  ModeSupervisor sup;
  EXPECT_THROW(sup.step(ControlMode::UnderwaterFlapping, MediumContext::air()),
               IllegalTransition);
  EXPECT_THROW(sup.step(ControlMode::UnderwaterVectored, MediumContext::air()),
               IllegalTransition);
}

TEST(ModeSupervisor, HoldsWaterModeUntilSurfaced) {
  ModeSupervisor sup;
  EXPECT_EQ(sup.step(ControlMode::UnderwaterVectored, MediumContext::water()),
            ControlMode::UnderwaterVectored);
  // flight demanded while still submerged: stay vectored
  EXPECT_EQ(sup.step(ControlMode::VerticalFlight, MediumContext::water()),
            ControlMode::UnderwaterVectored);
  // once the medium flips the pending flight mode engages
  EXPECT_EQ(sup.step(ControlMode::VerticalFlight, MediumContext::air()),
            ControlMode::VerticalFlight);
}

TEST(ModeSupervisor, SplashdownFallsBackToVectored) {
  ModeSupervisor sup;
  EXPECT_EQ(sup.step(ControlMode::HorizontalFlight, MediumContext::air()),
            ControlMode::HorizontalFlight);
  EXPECT_EQ(sup.step(ControlMode::HorizontalFlight, MediumContext::water()),
            ControlMode::UnderwaterVectored);
}

TEST(ModeSupervisor, NeverYieldsWaterModeInAir) {
  std::uniform_int_distribution<int> mode_pick(0, 3);
  std::uniform_int_distribution<int> medium_pick(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    ModeSupervisor sup;
    for (int step = 0; step < 50; ++step) {
      const auto requested = static_cast<ControlMode>(mode_pick(rng));
      const MediumContext medium = medium_pick(rng)
                                       ? MediumContext::water()
                                       : MediumContext::air();
      try {
        const ControlMode out = sup.step(requested, medium);
        if (medium.k == 0) EXPECT_FALSE(is_water_mode(out));
      } catch (const IllegalTransition&) {
        // explicit rejection is the other legal outcome
      }
    }
  }
}

TEST(WaterExitScenario, HoldsVectoredThenSwitchesToFlight) {
  ScenarioConfig cfg;
  cfg.duration = 4.0;
  cfg.record_stride = 10;
  cfg.initial.P = Vec3(0.0, 0.0, -0.2);
  cfg.mode_schedule.entries = {{0.0, ControlMode::VerticalFlight}};
  cfg.pilot_schedule.entries = {{0.0, PilotInput{1.0, 0.0, 1.0, 0.0}}};
  cfg.target_schedule.entries = {{0.0, Vec3(0.0, 0.0, 1.0)}};
  const TrajectoryRecord rec = run_scenario(cfg);

  EXPECT_EQ(rec.samples.front().mode,
            static_cast<int>(ControlMode::UnderwaterVectored));
  ASSERT_FALSE(rec.transitions.empty());
  const ModeTransition& tr = rec.transitions.front();
  EXPECT_EQ(tr.from, ControlMode::UnderwaterVectored);
  EXPECT_EQ(tr.to, ControlMode::VerticalFlight);
  EXPECT_EQ(rec.samples.back().k, 0);
  EXPECT_EQ(rec.samples.back().mode,
            static_cast<int>(ControlMode::VerticalFlight));
  // the crossing happens after a finite thrust-up phase, not instantly
  EXPECT_GT(tr.t, 0.05);
}
