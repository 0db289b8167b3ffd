#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <utility>

#include "uaav/dynamics.hpp"
#include "uaav/errors.hpp"
#include "uaav/types.hpp"

namespace uaav {

/// Rotor thrust/torque constants. Thrust follows T = C_T * omega^2 with a
/// per-medium coefficient; the underwater value is an effective constant
/// absorbing blade stall, tuned against the vectored-mode drag balance.
struct RotorParams {
  double C_T_air{1.0112e-5};    // N s^2 / rad^2, 15.8 N per rotor at omega_max
  double C_T_water{1.93e-6};    // effective underwater coefficient
  double C_Q_air{0.012};        // reaction torque arm (m)
  double C_Q_water{0.02};
  double omega_max{1250.0};     // rad/s
  double gamma_min{-M_PI / 2.0};
  double gamma_max{M_PI / 2.0};
  std::array<double, 2> spin_direction{+1.0, -1.0};

  double thrust_coeff(const MediumContext& medium) const {
    return medium.k ? C_T_water : C_T_air;
  }
  double torque_coeff(const MediumContext& medium) const {
    return medium.k ? C_Q_water : C_Q_air;
  }
};

/// Speeds and tilt angles of the two rotors.
struct RotorCommand {
  double omega1{0.0}, omega2{0.0};  // rad/s
  double gamma1{0.0}, gamma2{0.0};  // rad
};

inline void check_rotor_command(const RotorCommand& cmd,
                                const RotorParams& p) {
  auto bad_omega = [&](double w) { return w < 0.0 || w > p.omega_max; };
  auto bad_gamma = [&](double g) { return g < p.gamma_min || g > p.gamma_max; };
  if (bad_omega(cmd.omega1) || bad_omega(cmd.omega2))
    throw CommandOutOfRange("rotor speed outside [0, omega_max]");
  if (bad_gamma(cmd.gamma1) || bad_gamma(cmd.gamma2))
    throw CommandOutOfRange("tilt angle outside servo limits");
}

/// Thrust and reaction torque of one rotor.
inline std::pair<double, double> rotor_thrust(double omega,
                                              const RotorParams& params,
                                              const MediumContext& medium,
                                              int rotor_index = 0) {
  if (omega < 0.0 || omega > params.omega_max)
    throw CommandOutOfRange("rotor_thrust: omega = " + std::to_string(omega) +
                            " outside [0, " + std::to_string(params.omega_max) +
                            "]");
  const double t = params.thrust_coeff(medium) * omega * omega;
  const double m = params.torque_coeff(medium) * t *
                   params.spin_direction[static_cast<std::size_t>(rotor_index)];
  return {t, m};
}

/// Wrench of the two tilt rotors about the CG. Forces resolve along
/// (cos g, 0, sin g); moments use the lateral arm a and pitch arm b, and the
/// yaw term carries the lateral arm on both rotors.
inline Wrench tilt_rotor_wrench(const RotorCommand& cmd,
                                const RotorParams& params, double a, double b,
                                const MediumContext& medium) {
  check_rotor_command(cmd, params);
  const double t1 = rotor_thrust(cmd.omega1, params, medium, 0).first;
  const double t2 = rotor_thrust(cmd.omega2, params, medium, 1).first;
  const double c1 = std::cos(cmd.gamma1), s1 = std::sin(cmd.gamma1);
  const double c2 = std::cos(cmd.gamma2), s2 = std::sin(cmd.gamma2);
  Wrench w;
  w.F = Vec3(t1 * c1 + t2 * c2, 0.0, t1 * s1 + t2 * s2);
  w.M = Vec3(t1 * a * s1 - t2 * a * s2,
             -t1 * b * s1 - t2 * b * s2,
             t2 * a * c2 - t1 * a * c1);
  return w;
}

/// Per-wing flapping constants. Cfx_bar/Cfz_bar feed the period-averaged
/// model; C_n_inst scales the quasi-steady normal-force law used in the
/// closed loop. Cfz_bar is zero for symmetric pitching.
struct FlappingParams {
  double S{0.028};          // wing area (m^2)
  double Cfx_bar{1.6636};   // period-averaged thrust coefficient, fitted at R = 0.5
  double Cfz_bar{0.0};      // period-averaged vertical coefficient
  double C_n_inst{2.0};     // instantaneous normal-force coefficient
};

/// Commanded offsets / instantaneous deflections of the three wings.
struct WingKinematicState {
  std::array<double, 3> theta{0.0, 0.0, 0.0};  // instantaneous pitch (rad)
  std::array<double, 3> X{0.0, 0.0, 0.0};      // commanded offsets (rad)
};

/// Period-averaged flapping forces at mean offset X_i in a flow (alpha, Vf).
inline std::pair<double, double> flapping_mean_thrust(
    double X_i, double alpha, double vf, const FlappingParams& wing,
    double rho_w) {
  const double rel = std::sin(X_i - alpha) * vf;
  const double q = 0.5 * rho_w * rel * rel * wing.S;
  return {q * wing.Cfx_bar, q * wing.Cfz_bar};
}

/// Quasi-steady instantaneous wing force: normal-force magnitude
/// N = qbar*S*C_n*sin(rel)*|sin(rel)| resolved into body axes by the wing
/// angle, (fx, fz) = N*(sin theta, cos theta). Matches the period-averaged
/// model on converged cycles (see time_averaged_coefficients).
inline std::pair<double, double> flapping_instantaneous_force(
    double theta_i, double alpha, double vf, const FlappingParams& wing,
    double rho_w) {
  const double srel = std::sin(theta_i - alpha);
  const double n = 0.5 * rho_w * vf * vf * wing.S * wing.C_n_inst * srel *
                   std::abs(srel);
  return {n * std::sin(theta_i), n * std::cos(theta_i)};
}

/// One sample of a recorded wing-force trace.
struct ForceSample {
  double t;
  double Tfx;
  double Tfz;
};

/// Period-averaged coefficients from a force trace by trapezoidal
/// quadrature. The integrand is downstream-positive, so the leading minus
/// sign yields positive coefficients for propulsive traces.
inline std::pair<double, double> time_averaged_coefficients(
    std::span<const ForceSample> trace, double period, int n, double rho_w,
    double vf, double S) {
  if (trace.size() < 2 || !(period > 0.0) || n < 1 || !(vf > 0.0))
    throw InsufficientTrace("time_averaged_coefficients: empty trace or bad window");
  const double span_needed = n * period;
  const double t0 = trace.front().t;
  if (trace.back().t - t0 + 1e-12 < span_needed)
    throw InsufficientTrace("time_averaged_coefficients: trace shorter than n periods");

  const double q = 0.5 * rho_w * vf * vf * S;
  double ix = 0.0, iz = 0.0;
  double t_end = t0 + span_needed;
  for (std::size_t i = 0; i + 1 < trace.size() && trace[i].t < t_end; ++i) {
    const double ta = trace[i].t;
    const double tb = std::min(trace[i + 1].t, t_end);
    const double w = 0.5 * (tb - ta);
    // linear interpolation of the trailing sample when the window ends
    // inside the last interval
    const double frac = (tb - trace[i].t) / (trace[i + 1].t - trace[i].t);
    const double fxb = trace[i].Tfx + frac * (trace[i + 1].Tfx - trace[i].Tfx);
    const double fzb = trace[i].Tfz + frac * (trace[i + 1].Tfz - trace[i].Tfz);
    ix += w * (trace[i].Tfx + fxb);
    iz += w * (trace[i].Tfz + fzb);
  }
  const double scale = -1.0 / (span_needed * q);
  return {ix * scale, iz * scale};
}

/// Assemble the total wing wrench from per-wing force magnitudes and angles.
/// Angles are the commanded offsets in the averaged model and the
/// instantaneous deflections in the closed loop. The yaw row carries no arm.
inline Wrench flapping_wrench(const std::array<double, 3>& tfx,
                              const std::array<double, 3>& angle, double a,
                              double b, double c) {
  const double s1 = std::sin(angle[0]), c1 = std::cos(angle[0]);
  const double s2 = std::sin(angle[1]), c2 = std::cos(angle[1]);
  const double s3 = std::sin(angle[2]), c3 = std::cos(angle[2]);
  Wrench w;
  w.F = Vec3(tfx[0] * s1 + tfx[1] * s2 + tfx[2] * s3,
             0.0,
             tfx[0] * c1 + tfx[1] * c2 + tfx[2] * c3);
  w.M = Vec3(tfx[0] * a * c1 - tfx[1] * a * c2,
             tfx[2] * c * c3 - tfx[0] * b * c1 - tfx[1] * b * c2,
             tfx[1] * s2 - tfx[0] * s1);
  return w;
}

}  // namespace uaav
