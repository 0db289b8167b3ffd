#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "uaav/actuation.hpp"
#include "uaav/aero.hpp"
#include "uaav/control.hpp"
#include "uaav/cpg.hpp"
#include "uaav/dynamics.hpp"
#include "uaav/errors.hpp"
#include "uaav/spatial.hpp"
#include "uaav/types.hpp"

namespace uaav {

/// Environment constants for the binary medium model.
struct MediumParams {
  double rho_air{1.225};
  double rho_water{1000.0};
  double surface_z{0.0};     // water surface height (m)
  double hysteresis{0.05};   // Schmitt band around the surface (m)
  double body_height{0.05};  // buoyancy ramp length through the surface (m)
};

/// Schmitt-trigger medium flag: switches to air only above surface + h/2
/// and to water only below surface - h/2.
inline int detect_medium_flag(double z, int previous_k, double surface_height,
                              double hysteresis) {
  if (previous_k == 1) {
    return (z > surface_height + hysteresis / 2.0) ? 0 : 1;
  }
  return (z < surface_height - hysteresis / 2.0) ? 1 : 0;
}

/// Fraction of the displaced volume below the surface, ramped linearly over
/// one body height so buoyancy stays continuous through the crossing.
inline double submergence_fraction(double z, double surface_height,
                                   double body_height) {
  return std::clamp(0.5 + (surface_height - z) / body_height, 0.0, 1.0);
}

inline MediumContext make_medium_context(const MediumParams& mp, int k,
                                         double z) {
  MediumContext ctx;
  ctx.k = k;
  ctx.rho = k ? mp.rho_water : mp.rho_air;
  ctx.rho_water = mp.rho_water;
  ctx.submergence = submergence_fraction(z, mp.surface_z, mp.body_height);
  return ctx;
}

inline MediumContext detect_medium(double z, int previous_k,
                                   double surface_height, double hysteresis,
                                   const MediumParams& mp = {}) {
  const int k = detect_medium_flag(z, previous_k, surface_height, hysteresis);
  MediumParams local = mp;
  local.surface_z = surface_height;
  local.hysteresis = hysteresis;
  return make_medium_context(local, k, z);
}

/// Everything the coupled derivative needs: vehicle, actuators, coefficient
/// tables, environment, and model switches.
struct SimModel {
  VehicleParams vehicle;
  RotorParams rotor;
  // Body rotation at a wing station splits cleanly: yaw sweeps the station
  // chordwise while pitch and roll heave it normal to the chord. The heave
  // part belongs to the unsteady regime a quasi-steady law misrepresents,
  // so it is scaled by this factor and off in the calibrated model.
  double wing_heave_coupling{0.0};
  // Chordwise sweep instead feeds a plain plate-drag term: a deflected wing
  // presents |sin theta| of its area broadside to the sweep. The value lumps
  // the hull's rotational resistance onto the wing stations; it is what
  // bounds a yaw maneuver and it vanishes in straight swimming.
  double wing_sweep_drag_cd{10.0};
  // Servo travel: the oscillator may command beyond it, the wing cannot
  // follow. The yaw gaits ride this limit for half of every stroke.
  double wing_travel{M_PI / 2.0};
  std::array<FlappingParams, kNumWings> wings{
      FlappingParams{0.028, 1.6636, 0.0, 2.0},
      FlappingParams{0.028, 1.6636, 0.0, 2.0},
      FlappingParams{0.020, 1.6636, 0.0, 2.0}};
  AeroCoefficients aero_air{default_air_table()};
  AeroCoefficients aero_water{default_water_table()};
  MediumParams medium;
  DynamicsOptions dynamics;
  double singularity_guard{kDefaultSingularityGuard};

  const AeroCoefficients& aero(const MediumContext& ctx) const {
    return ctx.k ? aero_water : aero_air;
  }

  std::array<Vec3, kNumWings> wing_positions() const {
    const auto& v = vehicle;
    return {Vec3(v.wing_pitch_arm, v.a, 0.0), Vec3(v.wing_pitch_arm, -v.a, 0.0),
            Vec3(-v.c, 0.0, 0.0)};
  }

  /// Servo-side view of the oscillator command: deflections clamp to the
  /// travel limit and the rate drops to zero while pinned there.
  void apply_servo_limit(std::array<double, kNumWings>& theta,
                         std::array<double, kNumWings>& rate) const {
    for (int i = 0; i < kNumWings; ++i) {
      if (theta[i] > wing_travel) {
        theta[i] = wing_travel;
        rate[i] = 0.0;
      } else if (theta[i] < -wing_travel) {
        theta[i] = -wing_travel;
        rate[i] = 0.0;
      }
    }
  }
};

/// Per-wing normal-force magnitudes for the quasi-steady closed loop. Each
/// wing sees the body velocity at its station plus its own pitch-rate wash.
inline std::array<double, kNumWings> wing_normal_forces(
    const SimModel& model, const RigidBodyState& body,
    const std::array<double, kNumWings>& theta,
    const std::array<double, kNumWings>& theta_rate,
    const MediumContext& medium) {
  std::array<double, kNumWings> n{};
  const auto pos = model.wing_positions();
  for (int i = 0; i < kNumWings; ++i) {
    const Vec3 sweep = body.Omega.cross(pos[i]);
    const double u = body.V[0];
    const double w = body.V[2] + model.wing_heave_coupling * sweep[2] +
                     theta_rate[i] * model.vehicle.wing_chord_arm;
    const double vf = std::hypot(u, w);
    const double alpha = (vf > 1e-12) ? std::atan2(w, u) : 0.0;
    const double srel = std::sin(theta[i] - alpha);
    n[i] = 0.5 * medium.rho_water * vf * vf * model.wings[i].S *
           model.wings[i].C_n_inst * srel * std::abs(srel);
  }
  return n;
}

/// Chordwise sweep drag of the wing stations: resists body rotation with a
/// quadratic plate law weighted by how much of each wing faces the sweep.
inline Wrench wing_sweep_drag(const SimModel& model, const RigidBodyState& body,
                              const std::array<double, kNumWings>& theta,
                              const MediumContext& medium) {
  Wrench w;
  const auto pos = model.wing_positions();
  for (int i = 0; i < kNumWings; ++i) {
    const double s = body.Omega.cross(pos[i])[0];
    const double d = -0.5 * medium.rho_water * model.wing_sweep_drag_cd *
                     model.wings[i].S * std::abs(std::sin(theta[i])) * s *
                     std::abs(s);
    w.F[0] += d;
    w.M += pos[i].cross(Vec3(d, 0.0, 0.0));
  }
  return w;
}

/// Control wrench for the active mode: tilt rotors in the flight and
/// vectored modes, instantaneous wing forces in the flapping mode; never
/// both at once.
inline Wrench assemble_wrench(const RigidBodyState& body, ControlMode mode,
                              const ActuatorCommand& cmd,
                              const std::array<double, kNumWings>& wing_theta,
                              const std::array<double, kNumWings>& wing_rate,
                              const MediumContext& medium,
                              const SimModel& model) {
  if (cmd.mode != mode) {
    throw ModeCommandMismatch("assemble_wrench: command built for " +
                              mode_name(cmd.mode) + " applied in " +
                              mode_name(mode));
  }
  if (mode == ControlMode::UnderwaterFlapping) {
    const auto n = wing_normal_forces(model, body, wing_theta, wing_rate, medium);
    Wrench w = flapping_wrench(n, wing_theta, model.vehicle.a,
                               model.vehicle.wing_pitch_arm, model.vehicle.c);
    w += wing_sweep_drag(model, body, wing_theta, medium);
    return w;
  }
  // the rotors ride above the hull; near the surface they already spin in
  // air while the body is still wet, which is what makes water exit work
  MediumContext rotor_medium = medium;
  if (medium.k == 1 &&
      body.P[2] > model.medium.surface_z - model.vehicle.rotor_clearance) {
    rotor_medium = MediumContext::air(model.medium.rho_air,
                                      model.medium.rho_water);
  }
  return tilt_rotor_wrench(cmd.rotor, model.rotor, model.vehicle.a,
                           model.vehicle.b, rotor_medium);
}

/// Coupled integration state: rigid body plus oscillator network.
struct FullState {
  RigidBodyState body;
  CpgNetworkState cpg;
};

namespace detail {

struct FullDerivative {
  Vec3 pdot, thetadot, vdot, omegadot;
  CpgDerivative cpg;
};

inline FullDerivative coupled_derivative(const FullState& s, ControlMode mode,
                                         const ActuatorCommand& cmd,
                                         int k_flag, const SimModel& model) {
  FullDerivative d;
  d.cpg = cpg_derivative(s.cpg, cmd.cpg);

  MediumContext medium = make_medium_context(model.medium, k_flag, s.body.P[2]);

  Wrench control;
  if (mode == ControlMode::UnderwaterFlapping) {
    auto theta = cpg_output(s.cpg);
    auto rate = cpg_output_rate(s.cpg, cmd.cpg);
    model.apply_servo_limit(theta, rate);
    control = assemble_wrench(s.body, mode, cmd, theta, rate, medium, model);
  } else {
    control = assemble_wrench(s.body, mode, cmd, {}, {}, medium, model);
  }

  const auto [pdot, thetadot] =
      kinematics_derivative(s.body, model.singularity_guard);
  const auto [vdot, omegadot] = dynamics_derivative(
      s.body, control, medium, model.aero(medium), model.vehicle,
      model.dynamics);
  d.pdot = pdot;
  d.thetadot = thetadot;
  d.vdot = vdot;
  d.omegadot = omegadot;
  return d;
}

inline FullState advance(const FullState& s, const FullDerivative& d,
                         double h) {
  FullState out = s;
  out.body.P += h * d.pdot;
  out.body.Theta.phi += h * d.thetadot[0];
  out.body.Theta.theta += h * d.thetadot[1];
  out.body.Theta.psi += h * d.thetadot[2];
  out.body.V += h * d.vdot;
  out.body.Omega += h * d.omegadot;
  for (int i = 0; i < kNumWings; ++i) {
    out.cpg.phi[i] += h * d.cpg.phidot[i];
    out.cpg.r[i] += h * d.cpg.rdot[i];
    out.cpg.rdot[i] += h * d.cpg.rddot[i];
    out.cpg.x[i] += h * d.cpg.xdot[i];
    out.cpg.xdot[i] += h * d.cpg.xddot[i];
  }
  return out;
}

inline FullState accumulate(const FullState& s, const FullDerivative& k1,
                            const FullDerivative& k2, const FullDerivative& k3,
                            const FullDerivative& k4, double dt) {
  auto comb3 = [&](const Vec3& a, const Vec3& b, const Vec3& c,
                   const Vec3& e) { return dt / 6.0 * (a + 2.0 * b + 2.0 * c + e); };
  FullState out = s;
  out.body.P += comb3(k1.pdot, k2.pdot, k3.pdot, k4.pdot);
  const Vec3 dth = comb3(k1.thetadot, k2.thetadot, k3.thetadot, k4.thetadot);
  out.body.Theta.phi += dth[0];
  out.body.Theta.theta += dth[1];
  out.body.Theta.psi += dth[2];
  out.body.V += comb3(k1.vdot, k2.vdot, k3.vdot, k4.vdot);
  out.body.Omega += comb3(k1.omegadot, k2.omegadot, k3.omegadot, k4.omegadot);
  auto comb1 = [&](double a, double b, double c, double e) {
    return dt / 6.0 * (a + 2.0 * b + 2.0 * c + e);
  };
  for (int i = 0; i < kNumWings; ++i) {
    out.cpg.phi[i] += comb1(k1.cpg.phidot[i], k2.cpg.phidot[i],
                            k3.cpg.phidot[i], k4.cpg.phidot[i]);
    out.cpg.r[i] += comb1(k1.cpg.rdot[i], k2.cpg.rdot[i], k3.cpg.rdot[i],
                          k4.cpg.rdot[i]);
    out.cpg.rdot[i] += comb1(k1.cpg.rddot[i], k2.cpg.rddot[i], k3.cpg.rddot[i],
                             k4.cpg.rddot[i]);
    out.cpg.x[i] += comb1(k1.cpg.xdot[i], k2.cpg.xdot[i], k3.cpg.xdot[i],
                          k4.cpg.xdot[i]);
    out.cpg.xdot[i] += comb1(k1.cpg.xddot[i], k2.cpg.xddot[i], k3.cpg.xddot[i],
                             k4.cpg.xddot[i]);
  }
  return out;
}

}  // namespace detail

/// One classical RK4 step of the coupled vehicle + CPG system with the
/// actuator command held constant (zero-order hold). The medium flag is
/// frozen over the step; the buoyancy ramp follows z continuously.
inline FullState rk4_step(const FullState& s, ControlMode mode,
                          const ActuatorCommand& cmd, int k_flag,
                          const SimModel& model, double dt,
                          double v_limit = 100.0, double omega_limit = 100.0) {
  using detail::advance;
  using detail::coupled_derivative;
  const auto k1 = coupled_derivative(s, mode, cmd, k_flag, model);
  const auto k2 =
      coupled_derivative(advance(s, k1, dt / 2.0), mode, cmd, k_flag, model);
  const auto k3 =
      coupled_derivative(advance(s, k2, dt / 2.0), mode, cmd, k_flag, model);
  const auto k4 = coupled_derivative(advance(s, k3, dt), mode, cmd, k_flag, model);
  FullState out = detail::accumulate(s, k1, k2, k3, k4, dt);

  if (!finite(out.body) || out.body.V.norm() > v_limit ||
      out.body.Omega.norm() > omega_limit) {
    throw NumericalDivergence(
        "state norm exceeded divergence bound (|V| = " +
        std::to_string(out.body.V.norm()) + ", |Omega| = " +
        std::to_string(out.body.Omega.norm()) + ")");
  }
  return out;
}

/// Scenario description: model constants, initial state, schedules,
/// integrator and output settings.
struct ScenarioConfig {
  SimModel model;
  RigidBodyState initial;
  Schedule<ControlMode> mode_schedule{{{0.0, ControlMode::VerticalFlight}}};
  Schedule<CpgParams> cpg_schedule;
  Schedule<PilotInput> pilot_schedule;
  Schedule<Vec3> target_schedule{{{0.0, Vec3::Zero()}}};
  double target_yaw{0.0};
  PidGains gains;
  MixerParams mixer;
  double dt{1e-3};
  double duration{10.0};
  int record_stride{10};
  double v_limit{100.0};
  double omega_limit{100.0};
};

struct TrajectorySample {
  double t{0.0};
  Vec3 P{Vec3::Zero()};
  Vec3 att{Vec3::Zero()};   // wrapped phi, theta, psi
  Vec3 V{Vec3::Zero()};
  Vec3 Omega{Vec3::Zero()};
  int mode{0};
  int k{0};
  RotorCommand rotor;
  std::array<double, kNumWings> wing_theta{};
  std::array<double, kNumWings> wing_force{};  // instantaneous normal forces
  Wrench control;
  // oscillator internals, for the wing-angle trace export
  std::array<double, kNumWings> cpg_r{};
  std::array<double, kNumWings> cpg_x{};
  std::array<double, kNumWings> cpg_phi{};
};

struct ModeTransition {
  double t;
  ControlMode from;
  ControlMode to;
};

struct TrajectoryRecord {
  std::vector<TrajectorySample> samples;
  std::vector<ModeTransition> transitions;
};

/// Deterministic closed-loop scenario run: one fixed-step clock drives the
/// controller (zero-order hold per step), the coupled RK4 integration and
/// the medium detector. Identical configs produce identical trajectories.
inline TrajectoryRecord run_scenario(const ScenarioConfig& cfg) {
  if (!(cfg.dt > 0.0) || cfg.duration < 0.0 || cfg.record_stride < 1)
    throw ConfigParseError("run_scenario: invalid integrator settings");
  if (const std::string bad =
          check_vehicle_params(cfg.model.vehicle, cfg.model.medium.rho_water);
      !bad.empty())
    throw ConfigParseError("run_scenario: vehicle invariant violated: " + bad);

  FullState state;
  state.body = cfg.initial;

  int k_flag = cfg.initial.P[2] <= cfg.model.medium.surface_z ? 1 : 0;
  k_flag = detect_medium_flag(cfg.initial.P[2], k_flag,
                              cfg.model.medium.surface_z,
                              cfg.model.medium.hysteresis);

  ModeSupervisor supervisor;
  CascadedPidController pid(cfg.gains);

  TrajectoryRecord record;
  const long n_steps = std::lround(cfg.duration / cfg.dt);

  ActuatorCommand cmd;
  if (!cfg.cpg_schedule.empty()) {
    cmd.cpg = cfg.cpg_schedule.at(0.0);
    // seed phases at the first preset's bias-consistent assignment; an
    // exactly symmetric start can sit on an unstable phase equilibrium
    // forever in a noise-free integration
    for (int i = 0; i < kNumWings; ++i)
      state.cpg.phi[i] = cmd.cpg.phase_bias[0][i];
  }
  ControlMode mode = ControlMode::VerticalFlight;

  auto snapshot = [&](double t) {
    TrajectorySample s;
    s.t = t;
    s.P = state.body.P;
    s.att = Vec3(wrap_pi(state.body.Theta.phi), wrap_pi(state.body.Theta.theta),
                 wrap_pi(state.body.Theta.psi));
    s.V = state.body.V;
    s.Omega = state.body.Omega;
    s.mode = static_cast<int>(mode);
    s.k = k_flag;
    s.rotor = cmd.rotor;
    const MediumContext medium =
        make_medium_context(cfg.model.medium, k_flag, state.body.P[2]);
    if (mode == ControlMode::UnderwaterFlapping) {
      s.wing_theta = cpg_output(state.cpg);
      auto rate = cpg_output_rate(state.cpg, cmd.cpg);
      cfg.model.apply_servo_limit(s.wing_theta, rate);
      s.wing_force =
          wing_normal_forces(cfg.model, state.body, s.wing_theta, rate, medium);
      s.control = assemble_wrench(state.body, mode, cmd, s.wing_theta, rate,
                                  medium, cfg.model);
      s.rotor = RotorCommand{};
    } else {
      s.wing_theta = {0.0, 0.0, 0.0};
      s.control = assemble_wrench(state.body, mode, cmd, {}, {}, medium,
                                  cfg.model);
    }
    s.cpg_r = state.cpg.r;
    s.cpg_x = state.cpg.x;
    s.cpg_phi = state.cpg.phi;
    record.samples.push_back(s);
  };

  auto supervise_and_command = [&](double t) {
    const MediumContext medium =
        make_medium_context(cfg.model.medium, k_flag, state.body.P[2]);
    const bool had_mode = supervisor.has_current();
    const ControlMode previous = had_mode ? supervisor.current() : mode;
    mode = supervisor.step(cfg.mode_schedule.at(t), medium);
    if (had_mode && mode != previous)
      record.transitions.push_back({t, previous, mode});

    switch (mode) {
      case ControlMode::VerticalFlight:
      case ControlMode::HorizontalFlight:
        cmd = pid.step(cfg.target_schedule.at(t), cfg.target_yaw, state.body,
                       cfg.dt, cfg.model.vehicle, cfg.model.rotor, medium,
                       mode);
        break;
      case ControlMode::UnderwaterVectored: {
        PilotInput pilot;
        if (!cfg.pilot_schedule.empty()) pilot = cfg.pilot_schedule.at(t);
        cmd = vectored_mix(pilot, cfg.model.rotor, cfg.mixer);
        break;
      }
      case ControlMode::UnderwaterFlapping:
        cmd.mode = ControlMode::UnderwaterFlapping;
        cmd.rotor = RotorCommand{};
        if (!cfg.cpg_schedule.empty()) cmd.cpg = cfg.cpg_schedule.at(t);
        break;
    }
  };

  for (long step = 0; step < n_steps; ++step) {
    const double t = static_cast<double>(step) * cfg.dt;
    supervise_and_command(t);
    if (step % cfg.record_stride == 0) snapshot(t);

    try {
      state = rk4_step(state, mode, cmd, k_flag, cfg.model, cfg.dt,
                       cfg.v_limit, cfg.omega_limit);
    } catch (const NumericalDivergence& e) {
      throw NumericalDivergence(std::string(e.what()) + " at t = " +
                                std::to_string(t + cfg.dt) + " s (step " +
                                std::to_string(step + 1) + ")");
    }

    k_flag = detect_medium_flag(state.body.P[2], k_flag,
                                cfg.model.medium.surface_z,
                                cfg.model.medium.hysteresis);
  }

  if (n_steps == 0) supervise_and_command(0.0);
  snapshot(static_cast<double>(n_steps) * cfg.dt);
  return record;
}

}  // namespace uaav
