#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "uaav/actuation.hpp"
#include "uaav/cpg.hpp"
#include "uaav/dynamics.hpp"
#include "uaav/errors.hpp"
#include "uaav/spatial.hpp"
#include "uaav/types.hpp"

namespace uaav {

enum class ControlMode {
  VerticalFlight = 0,
  HorizontalFlight = 1,
  UnderwaterVectored = 2,
  UnderwaterFlapping = 3,
};

inline bool is_water_mode(ControlMode m) {
  return m == ControlMode::UnderwaterVectored ||
         m == ControlMode::UnderwaterFlapping;
}

inline std::string mode_name(ControlMode m) {
  switch (m) {
    case ControlMode::VerticalFlight: return "vertical_flight";
    case ControlMode::HorizontalFlight: return "horizontal_flight";
    case ControlMode::UnderwaterVectored: return "underwater_vectored";
    case ControlMode::UnderwaterFlapping: return "underwater_flapping";
  }
  return "?";
}

inline ControlMode mode_from_name(const std::string& s) {
  if (s == "vertical_flight") return ControlMode::VerticalFlight;
  if (s == "horizontal_flight") return ControlMode::HorizontalFlight;
  if (s == "underwater_vectored") return ControlMode::UnderwaterVectored;
  if (s == "underwater_flapping") return ControlMode::UnderwaterFlapping;
  throw ConfigParseError("unknown control mode: " + s);
}

/// Time-tagged schedule; at(t) returns the last entry not later than t.
template <typename T>
struct Schedule {
  std::vector<std::pair<double, T>> entries;

  bool empty() const { return entries.empty(); }

  const T& at(double t) const {
    const T* best = nullptr;
    for (const auto& [when, value] : entries) {
      if (when <= t + 1e-12) best = &value;
    }
    if (!best) best = &entries.front().second;
    return *best;
  }
};

/// Single-axis PID with clamped integrator and clamped output.
class Pid {
public:
  Pid() = default;
  Pid(double kp, double ki, double kd) : kp_(kp), ki_(ki), kd_(kd) {}

  void set_gains(double kp, double ki, double kd) {
    kp_ = kp;
    ki_ = ki;
    kd_ = kd;
  }
  void set_limits(double integrator_limit, double output_limit) {
    int_limit_ = integrator_limit;
    out_limit_ = output_limit;
  }
  void reset() {
    integral_ = 0.0;
    prev_error_ = 0.0;
    primed_ = false;
  }

  double update(double error, double dt) {
    integral_ = std::clamp(integral_ + error * dt, -int_limit_, int_limit_);
    const double deriv = primed_ ? (error - prev_error_) / dt : 0.0;
    prev_error_ = error;
    primed_ = true;
    const double out = kp_ * error + ki_ * integral_ + kd_ * deriv;
    return std::clamp(out, -out_limit_, out_limit_);
  }

private:
  double kp_{0.0}, ki_{0.0}, kd_{0.0};
  double int_limit_{1.0};
  double out_limit_{1e9};
  double integral_{0.0};
  double prev_error_{0.0};
  bool primed_{false};
};

struct PidAxisGains {
  double kp{0.0}, ki{0.0}, kd{0.0};
};

/// Gains of the two cascaded loops plus the auxiliary roll/yaw regulators
/// realized through the tilt/thrust allocation.
struct PidGains {
  PidAxisGains pos[3] = {{0.9, 0.0, 0.0}, {0.9, 0.0, 0.0}, {0.9, 0.0, 0.0}};
  PidAxisGains vel[3] = {{3.0, 0.8, 0.0}, {3.0, 0.8, 0.0}, {3.0, 0.8, 0.0}};
  double vel_limit{2.5};        // position-loop output (m/s)
  double accel_limit{8.0};      // velocity-loop output (m/s^2)
  double integrator_limit{2.0};
  double roll_kp{0.4}, roll_kd{0.15};   // differential tilt (rad per rad)
  double yaw_kp{0.3}, yaw_kd{0.1};      // differential speed (fraction)
};

/// Actuator command, tagged by the mode it was produced for. Flight and
/// vectored modes populate the rotor command; flapping mode carries the
/// CPG targets.
struct ActuatorCommand {
  ControlMode mode{ControlMode::VerticalFlight};
  RotorCommand rotor;
  CpgParams cpg;
};

/// Two-stage position/velocity cascade for the flight modes. Stage one
/// turns position error into a velocity setpoint; stage two turns velocity
/// error into an earth-frame specific force with weight feedforward, which
/// the allocator maps to (thrust, tilt) through the rotor wrench model.
/// Yaw is regulated by rotor speed differential, roll by tilt differential.
class CascadedPidController {
public:
  CascadedPidController() { configure(PidGains{}); }
  explicit CascadedPidController(const PidGains& gains) { configure(gains); }

  void configure(const PidGains& gains) {
    gains_ = gains;
    for (int i = 0; i < 3; ++i) {
      pos_[i].set_gains(gains.pos[i].kp, gains.pos[i].ki, gains.pos[i].kd);
      pos_[i].set_limits(gains.integrator_limit, gains.vel_limit);
      vel_[i].set_gains(gains.vel[i].kp, gains.vel[i].ki, gains.vel[i].kd);
      vel_[i].set_limits(gains.integrator_limit, gains.accel_limit);
    }
    reset();
  }

  void reset() {
    for (auto& p : pos_) p.reset();
    for (auto& p : vel_) p.reset();
  }

  ActuatorCommand step(const Vec3& target_pos, double target_yaw,
                       const RigidBodyState& state, double dt,
                       const VehicleParams& vp, const RotorParams& rp,
                       const MediumContext& medium, ControlMode mode) {
    const Mat3 R = rotation_body_to_earth(state.Theta);
    const Vec3 v_earth = R * state.V;

    Vec3 v_set;
    for (int i = 0; i < 3; ++i)
      v_set[i] = pos_[i].update(target_pos[i] - state.P[i], dt);

    Vec3 a_des;
    for (int i = 0; i < 3; ++i)
      a_des[i] = vel_[i].update(v_set[i] - v_earth[i], dt);

    // weight feedforward; the velocity integrators absorb lift as it builds
    const Vec3 f_earth = vp.m * a_des + Vec3(0.0, 0.0, vp.weight());
    const Vec3 f_body = R.transpose() * f_earth;

    // lateral force is not realizable by the rotor pair; allocate in x-z
    double thrust = std::hypot(f_body[0], f_body[2]);
    const double t_max = 2.0 * rp.thrust_coeff(medium) * rp.omega_max * rp.omega_max;
    thrust = std::min(thrust, t_max);
    double gamma = (thrust > 1e-9) ? std::atan2(f_body[2], f_body[0])
                                   : M_PI / 2.0;
    gamma = std::clamp(gamma, rp.gamma_min, rp.gamma_max);

    const double d_gamma =
        std::clamp(-gains_.roll_kp * wrap_pi(state.Theta.phi) -
                       gains_.roll_kd * state.Omega[0],
                   -0.3, 0.3);
    const double d_speed =
        std::clamp(gains_.yaw_kp * wrap_pi(target_yaw - state.Theta.psi) -
                       gains_.yaw_kd * state.Omega[2],
                   -0.2, 0.2);

    ActuatorCommand cmd;
    cmd.mode = mode;
    const double ct = rp.thrust_coeff(medium);
    const double t1 = std::clamp(thrust / 2.0 * (1.0 - d_speed), 0.0,
                                 ct * rp.omega_max * rp.omega_max);
    const double t2 = std::clamp(thrust / 2.0 * (1.0 + d_speed), 0.0,
                                 ct * rp.omega_max * rp.omega_max);
    cmd.rotor.omega1 = std::sqrt(t1 / ct);
    cmd.rotor.omega2 = std::sqrt(t2 / ct);
    cmd.rotor.gamma1 = std::clamp(gamma + d_gamma, rp.gamma_min, rp.gamma_max);
    cmd.rotor.gamma2 = std::clamp(gamma - d_gamma, rp.gamma_min, rp.gamma_max);
    return cmd;
  }

private:
  PidGains gains_;
  Pid pos_[3];
  Pid vel_[3];
};

/// Normalized pilot stick inputs, each in [-1, 1].
struct PilotInput {
  double throttle{0.0};
  double roll{0.0};
  double pitch{0.0};
  double yaw{0.0};
};

struct MixerParams {
  double throttle_scale{1.0};   // fraction of omega_max at full throttle
  double yaw_scale{0.2};        // differential speed fraction
  double pitch_scale{M_PI / 2.0};  // common tilt at full pitch (rad)
  double roll_scale{0.3};       // differential tilt at full roll (rad)
};

/// Open-loop mixing for underwater vectored propulsion: throttle to common
/// speed, yaw to speed differential, pitch to common tilt, roll to tilt
/// differential. Outputs are saturated to actuator limits.
inline ActuatorCommand vectored_mix(const PilotInput& pilot,
                                    const RotorParams& rp,
                                    const MixerParams& mix = {}) {
  auto in_range = [](double v) { return v >= -1.0 && v <= 1.0; };
  if (!in_range(pilot.throttle) || !in_range(pilot.roll) ||
      !in_range(pilot.pitch) || !in_range(pilot.yaw))
    throw InputOutOfRange("vectored_mix: pilot input outside [-1, 1]");

  ActuatorCommand cmd;
  cmd.mode = ControlMode::UnderwaterVectored;
  const double common = pilot.throttle * mix.throttle_scale * rp.omega_max;
  const double diff = pilot.yaw * mix.yaw_scale * rp.omega_max;
  cmd.rotor.omega1 = std::clamp(common - diff, 0.0, rp.omega_max);
  cmd.rotor.omega2 = std::clamp(common + diff, 0.0, rp.omega_max);
  const double gamma = pilot.pitch * mix.pitch_scale;
  const double dgamma = pilot.roll * mix.roll_scale;
  cmd.rotor.gamma1 = std::clamp(gamma + dgamma, rp.gamma_min, rp.gamma_max);
  cmd.rotor.gamma2 = std::clamp(gamma - dgamma, rp.gamma_min, rp.gamma_max);
  return cmd;
}

/// Mode arbiter. The scenario schedule requests modes; the supervisor
/// constrains them to the medium: a water mode demanded in air is an error,
/// a flight mode demanded while submerged keeps the vehicle in its water
/// mode (vectored by default) until it actually surfaces.
class ModeSupervisor {
public:
  ControlMode step(ControlMode requested, const MediumContext& medium) {
    ControlMode out;
    if (is_water_mode(requested)) {
      if (medium.k == 0) {
        throw IllegalTransition("schedule demands " + mode_name(requested) +
                                " while the vehicle is in air");
      }
      out = requested;
    } else {
      if (medium.k == 1) {
        out = (has_current_ && is_water_mode(current_))
                  ? current_
                  : ControlMode::UnderwaterVectored;
      } else {
        out = requested;
      }
    }
    current_ = out;
    has_current_ = true;
    return out;
  }

  bool has_current() const { return has_current_; }
  ControlMode current() const { return current_; }

private:
  ControlMode current_{ControlMode::VerticalFlight};
  bool has_current_{false};
};

}  // namespace uaav
