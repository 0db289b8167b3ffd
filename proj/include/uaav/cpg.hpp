#pragma once

#include <array>
#include <cmath>
#include <string>

#include "uaav/errors.hpp"

namespace uaav {

inline constexpr int kNumWings = 3;

/// Targets and gains of the three-oscillator network. coupling_w[i][j] and
/// phase_bias[i][j] describe how oscillator j pulls on oscillator i; the
/// bias is the target of (phi_j - phi_i).
struct CpgParams {
  std::array<double, kNumWings> f{2.3873, 2.3873, 2.3873};   // Hz
  std::array<double, kNumWings> R{0.5, 0.5, 0.5};            // rad
  std::array<double, kNumWings> X{0.0, 0.0, 0.0};            // rad
  double a_r{20.0};                                          // 1/s
  double a_x{20.0};                                          // 1/s
  std::array<std::array<double, kNumWings>, kNumWings> coupling_w{};
  std::array<std::array<double, kNumWings>, kNumWings> phase_bias{};

  /// Symmetric all-to-all coupling with zero biases.
  static CpgParams with_uniform_coupling(double w = 4.0) {
    CpgParams p;
    for (int i = 0; i < kNumWings; ++i)
      for (int j = 0; j < kNumWings; ++j)
        p.coupling_w[i][j] = (i == j) ? 0.0 : w;
    return p;
  }
};

/// Per-oscillator phase, amplitude and offset with their rates. Amplitude
/// may transiently go negative; the dynamics do not constrain its sign.
struct CpgNetworkState {
  std::array<double, kNumWings> phi{};
  std::array<double, kNumWings> r{};
  std::array<double, kNumWings> rdot{};
  std::array<double, kNumWings> x{};
  std::array<double, kNumWings> xdot{};
};

struct CpgDerivative {
  std::array<double, kNumWings> phidot{};
  std::array<double, kNumWings> rdot{};
  std::array<double, kNumWings> rddot{};
  std::array<double, kNumWings> xdot{};
  std::array<double, kNumWings> xddot{};
};

/// Coupled phase-oscillator dynamics:
///   phidot_i = 2 pi f_i + sum_j w_ij sin(phi_j - phi_i - bias_ij)
///   rddot_i  = a_r (a_r/4 (R_i - r_i) - rdot_i)
///   xddot_i  = a_x (a_x/4 (X_i - x_i) - xdot_i)
inline CpgDerivative cpg_derivative(const CpgNetworkState& s,
                                    const CpgParams& p) {
  CpgDerivative d;
  for (int i = 0; i < kNumWings; ++i) {
    double coup = 0.0;
    for (int j = 0; j < kNumWings; ++j) {
      if (j == i) continue;
      coup += p.coupling_w[i][j] *
              std::sin(s.phi[j] - s.phi[i] - p.phase_bias[i][j]);
    }
    d.phidot[i] = 2.0 * M_PI * p.f[i] + coup;
    d.rdot[i] = s.rdot[i];
    d.rddot[i] = p.a_r * (p.a_r / 4.0 * (p.R[i] - s.r[i]) - s.rdot[i]);
    d.xdot[i] = s.xdot[i];
    d.xddot[i] = p.a_x * (p.a_x / 4.0 * (p.X[i] - s.x[i]) - s.xdot[i]);
  }
  return d;
}

/// One classical RK4 step of the network. dt <= 1/(20 max f_i) recommended.
inline CpgNetworkState cpg_step(const CpgNetworkState& s, const CpgParams& p,
                                double dt) {
  auto add = [](const CpgNetworkState& a, const CpgDerivative& d, double h) {
    CpgNetworkState out = a;
    for (int i = 0; i < kNumWings; ++i) {
      out.phi[i] += h * d.phidot[i];
      out.r[i] += h * d.rdot[i];
      out.rdot[i] += h * d.rddot[i];
      out.x[i] += h * d.xdot[i];
      out.xdot[i] += h * d.xddot[i];
    }
    return out;
  };
  const CpgDerivative k1 = cpg_derivative(s, p);
  const CpgDerivative k2 = cpg_derivative(add(s, k1, dt / 2.0), p);
  const CpgDerivative k3 = cpg_derivative(add(s, k2, dt / 2.0), p);
  const CpgDerivative k4 = cpg_derivative(add(s, k3, dt), p);
  CpgNetworkState out = s;
  for (int i = 0; i < kNumWings; ++i) {
    out.phi[i] += dt / 6.0 *
                  (k1.phidot[i] + 2.0 * k2.phidot[i] + 2.0 * k3.phidot[i] +
                   k4.phidot[i]);
    out.r[i] += dt / 6.0 *
                (k1.rdot[i] + 2.0 * k2.rdot[i] + 2.0 * k3.rdot[i] + k4.rdot[i]);
    out.rdot[i] += dt / 6.0 *
                   (k1.rddot[i] + 2.0 * k2.rddot[i] + 2.0 * k3.rddot[i] +
                    k4.rddot[i]);
    out.x[i] += dt / 6.0 *
                (k1.xdot[i] + 2.0 * k2.xdot[i] + 2.0 * k3.xdot[i] + k4.xdot[i]);
    out.xdot[i] += dt / 6.0 *
                   (k1.xddot[i] + 2.0 * k2.xddot[i] + 2.0 * k3.xddot[i] +
                    k4.xddot[i]);
  }
  return out;
}

/// Oscillator outputs theta_i = x_i + r_i cos(phi_i).
inline std::array<double, kNumWings> cpg_output(const CpgNetworkState& s) {
  return {s.x[0] + s.r[0] * std::cos(s.phi[0]),
          s.x[1] + s.r[1] * std::cos(s.phi[1]),
          s.x[2] + s.r[2] * std::cos(s.phi[2])};
}

/// Output rates, needed by the quasi-steady wing model for the pitch-rate
/// wash term.
inline std::array<double, kNumWings> cpg_output_rate(const CpgNetworkState& s,
                                                     const CpgParams& p) {
  const CpgDerivative d = cpg_derivative(s, p);
  std::array<double, kNumWings> out{};
  for (int i = 0; i < kNumWings; ++i) {
    out[i] = s.xdot[i] + s.rdot[i] * std::cos(s.phi[i]) -
             s.r[i] * std::sin(s.phi[i]) * d.phidot[i];
  }
  return out;
}

enum class CpgPreset { Forward, Roll, Pitch, YawPos, YawNeg };

/// Options shaping a behavior preset: offset magnitude for roll/pitch and
/// the tail phasing of the forward gait (in-phase vs opposed).
struct PresetOptions {
  double magnitude{0.3};   // rad, roll/pitch offset size
  bool tail_antiphase{false};
};

inline CpgPreset preset_from_name(const std::string& name) {
  if (name == "forward") return CpgPreset::Forward;
  if (name == "roll") return CpgPreset::Roll;
  if (name == "pitch") return CpgPreset::Pitch;
  if (name == "yaw_pos") return CpgPreset::YawPos;
  if (name == "yaw_neg") return CpgPreset::YawNeg;
  throw UnknownPreset("unknown behavior preset: " + name);
}

/// Behavior presets: wing offsets and phase biases for the stock flapping
/// behaviors, at power setting (f, R).
inline CpgParams behavior_preset(CpgPreset preset, double f, double R,
                                 const PresetOptions& opt = {}) {
  CpgParams p = CpgParams::with_uniform_coupling();
  p.f = {f, f, f};
  p.R = {R, R, R};
  p.X = {0.0, 0.0, 0.0};
  switch (preset) {
    case CpgPreset::Forward:
      if (opt.tail_antiphase) {
        // wings 1 and 2 in phase, tail opposed
        p.phase_bias[0][2] = p.phase_bias[1][2] = M_PI;
        p.phase_bias[2][0] = p.phase_bias[2][1] = -M_PI;
      }
      break;
    case CpgPreset::Roll:
      p.X = {opt.magnitude, -opt.magnitude, 0.0};
      break;
    case CpgPreset::Pitch:
      p.X = {opt.magnitude, opt.magnitude, -opt.magnitude};
      break;
    case CpgPreset::YawPos:
      p.X = {M_PI / 2.0, 0.0, 0.0};
      break;
    case CpgPreset::YawNeg:
      p.X = {0.0, M_PI / 2.0, 0.0};
      break;
  }
  return p;
}

inline CpgParams behavior_preset(const std::string& name, double f, double R,
                                 const PresetOptions& opt = {}) {
  return behavior_preset(preset_from_name(name), f, R, opt);
}

/// Smooth oscillator network: owns state and targets. Swapping parameters
/// leaves the state untouched, so the output stays C1-continuous across
/// behavior switches.
class CpgNetwork {
public:
  CpgNetwork() : params_(CpgParams::with_uniform_coupling()) {}
  explicit CpgNetwork(const CpgParams& params) : params_(params) {}

  void set_params(const CpgParams& params) { params_ = params; }
  const CpgParams& params() const { return params_; }

  const CpgNetworkState& state() const { return state_; }
  CpgNetworkState& state() { return state_; }

  void step(double dt) { state_ = cpg_step(state_, params_, dt); }
  std::array<double, kNumWings> output() const { return cpg_output(state_); }
  std::array<double, kNumWings> output_rate() const {
    return cpg_output_rate(state_, params_);
  }

private:
  CpgParams params_;
  CpgNetworkState state_;
};

}  // namespace uaav
