#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "uaav/analysis.hpp"
#include "uaav/csv.hpp"
#include "uaav/sim.hpp"

namespace uaav {

inline std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct ValidationCheck {
  std::string name;
  bool passed{false};
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

namespace detail {

/// Analytic map from Euler rates to body rates, assembled column by column
/// from the axis decomposition of the ZXY sequence. Used as the independent
/// route for checking the printed rate transform.
inline Mat3 euler_rate_to_body_matrix(const EulerZXY& att) {
  const double cf = std::cos(att.phi), sf = std::sin(att.phi);
  const double ct = std::cos(att.theta), st = std::sin(att.theta);
  Mat3 B;
  B.col(0) = Vec3(ct, 0.0, st);               // roll axis seen in body frame
  B.col(1) = Vec3(0.0, 1.0, 0.0);             // pitch axis
  B.col(2) = Vec3(-cf * st, sf, cf * ct);     // yaw axis
  return B;
}

}  // namespace detail

/// Run the built-in invariant suite against a scenario configuration
/// (defaults when none is given). Each check is independent; the report
/// lists one pass/fail entry per property.
inline ValidationReport run_validation(const ScenarioConfig& cfg = {}) {
  ValidationReport report;
  auto add = [&](const std::string& name, bool ok, const std::string& detail) {
    report.checks.push_back({name, ok, detail});
  };

  std::mt19937 rng(20240615u);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  std::uniform_real_distribution<double> roll_angle(-1.35, 1.35);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  {
    double worst_ortho = 0.0, worst_det = 0.0;
    for (int i = 0; i < 500; ++i) {
      const EulerZXY att{angle(rng), angle(rng), angle(rng)};
      const Mat3 R = rotation_body_to_earth(att);
      worst_ortho = std::max(
          worst_ortho,
          (R * R.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff());
      worst_det = std::max(worst_det, std::abs(R.determinant() - 1.0));
    }
    add("spatial.orthogonality", worst_ortho < 1e-12 && worst_det < 1e-12,
        "max |RR^T - I| = " + format_g9(worst_ortho));
  }

  {
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      const EulerZXY att{roll_angle(rng), angle(rng), angle(rng)};
      const Mat3 W = angular_rate_transform(att);
      const Mat3 B = detail::euler_rate_to_body_matrix(att);
      worst = std::max(worst, (W * B - Mat3::Identity()).cwiseAbs().maxCoeff());
    }
    add("spatial.rate_transform_inverse", worst < 1e-9,
        "max |WB - I| = " + format_g9(worst));
  }

  {
    CpgParams p = CpgParams::with_uniform_coupling(0.0);
    p.R = {0.5, 0.5, 0.5};
    CpgNetworkState s;
    const double dt = 1e-3;
    double worst = 0.0;
    for (int step = 1; step <= 500; ++step) {
      s = cpg_step(s, p, dt);
      const double t = step * dt;
      const double expected =
          0.5 * (1.0 - (1.0 + p.a_r * t / 2.0) * std::exp(-p.a_r * t / 2.0));
      worst = std::max(worst, std::abs(s.r[0] - expected));
    }
    add("cpg.analytic_convergence", worst < 1e-6,
        "max |r - closed form| = " + format_g9(worst));
  }

  {
    CpgParams p = CpgParams::with_uniform_coupling();
    CpgNetworkState s;
    const double dt = 1e-3;
    std::vector<double> trace;
    for (int step = 0; step < 8000; ++step) {
      s = cpg_step(s, p, dt);
      if (step >= 3000) trace.push_back(cpg_output(s)[0]);
    }
    const double period = mean_crossing_period(trace, dt);
    const double expected = 1.0 / p.f[0];
    const double rel = std::abs(period - expected) / expected;
    add("cpg.frequency_accuracy", rel < 1e-3,
        "relative period error = " + format_g9(rel));
  }

  {
    // converged symmetric cycle: integrate fz over exact periods in phase
    const FlappingParams wing = cfg.model.wings[0];
    const double vf = 0.6, R = 0.5;
    const int n = 4096;
    double acc = 0.0, peak = 0.0;
    for (int i = 0; i < n; ++i) {
      const double phi = 2.0 * M_PI * i / n;
      const double theta = R * std::cos(phi);
      const double fz =
          flapping_instantaneous_force(theta, 0.0, vf, wing, 1000.0).second;
      acc += fz;
      peak = std::max(peak, std::abs(fz));
    }
    const double mean_fz = std::abs(acc / n);
    add("flapping.zero_mean_fz", peak > 0.0 && mean_fz < 1e-6 * peak,
        "|mean fz| / peak = " + format_g9(mean_fz / std::max(peak, 1e-300)));
  }

  {
    int k = 1, switches = 0;
    for (int i = 0; i < 2000; ++i) {
      const double z = 0.01 * std::sin(0.1 * i);  // stays inside the band
      const int nk = detect_medium_flag(z, k, 0.0, 0.05);
      if (nk != k) ++switches;
      k = nk;
    }
    add("medium.hysteresis", switches == 0,
        "flag switches inside the band = " + std::to_string(switches));
  }

  {
    ScenarioConfig sc = cfg;
    sc.duration = 0.5;
    sc.dt = 1e-3;
    sc.record_stride = 5;
    sc.initial.P = Vec3(0.0, 0.0, -2.0);
    sc.initial.V = Vec3(0.2, 0.0, 0.05);
    sc.mode_schedule.entries = {{0.0, ControlMode::UnderwaterVectored}};
    sc.pilot_schedule.entries.clear();
    const std::uint64_t h1 = fnv1a(trajectory_to_csv(run_scenario(sc)));
    const std::uint64_t h2 = fnv1a(trajectory_to_csv(run_scenario(sc)));
    add("sim.determinism", h1 == h2,
        h1 == h2 ? "identical output hash" : "hash mismatch");
  }

  {
    std::string bad = cfg.model.aero_air.check();
    if (bad.empty()) bad = cfg.model.aero_water.check();
    add(bad.empty() ? "aero.table_sanity" : bad, bad.empty(),
        bad.empty() ? "CD >= 0 and CL(0,.) = 0 hold" : "violated");
  }

  {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      RigidBodyState s;
      s.Theta = {roll_angle(rng), angle(rng), angle(rng)};
      s.V = Vec3(unit(rng), unit(rng), unit(rng)) * 2.0;
      s.Omega = Vec3(unit(rng), unit(rng), unit(rng)) * 2.0;
      Wrench ctl;
      ctl.F = Vec3(unit(rng), unit(rng), unit(rng)) * 5.0;
      ctl.M = Vec3(unit(rng), unit(rng), unit(rng));
      for (int k = 0; k <= 1; ++k) {
        const MediumContext medium =
            k ? MediumContext::water(cfg.model.medium.rho_water)
              : MediumContext::air(cfg.model.medium.rho_air,
                                   cfg.model.medium.rho_water);
        const auto& coeffs = cfg.model.aero(medium);
        const auto [vdot, omegadot] = dynamics_derivative(
            s, ctl, medium, coeffs, cfg.model.vehicle, cfg.model.dynamics);

        // independent dense route: assemble the full 6x6 system and solve
        const double kk = k ? 1.0 : 0.0;
        Mat6 A = Mat6::Zero();
        const auto& vp = cfg.model.vehicle;
        for (int j = 0; j < 3; ++j) {
          A(j, j) = vp.m + kk * vp.Ma[j];
          A(j + 3, j + 3) = vp.J0[j] + kk * vp.Ja[j];
        }
        const auto [alpha, beta, vf] = flow_angles(s.V);
        const Wrench fluid =
            cfg.model.dynamics.fluid_enabled
                ? fluid_wrench(alpha, beta, vf, medium, coeffs, vp)
                : Wrench{};
        const Wrench restoring = restoring_wrench(s.Theta, medium, vp);
        Vec6 rhs;
        rhs.head<3>() = ctl.F - fluid.F + restoring.F -
                        (A.topLeftCorner<3, 3>() * s.Omega).cross(s.V);
        rhs.tail<3>() = ctl.M - fluid.M + restoring.M -
                        kk * (vp.Ma.cwiseProduct(s.V)).cross(s.V) +
                        cfg.model.dynamics.gyroscopic_sign *
                            (A.bottomRightCorner<3, 3>() * s.Omega)
                                .cross(s.Omega);
        const Vec6 acc = A.fullPivLu().solve(rhs);
        const double err =
            std::max((acc.head<3>() - vdot).cwiseAbs().maxCoeff(),
                     (acc.tail<3>() - omegadot).cwiseAbs().maxCoeff());
        const double scale =
            std::max(1.0, std::max(acc.head<3>().cwiseAbs().maxCoeff(),
                                   acc.tail<3>().cwiseAbs().maxCoeff()));
        worst = std::max(worst, err / scale);
      }
    }
    add("dynamics.dense_solve_oracle", worst < 1e-10,
        "max relative error = " + format_g9(worst));
  }

  {
    const RotorParams rp = cfg.model.rotor;
    const MediumContext air = MediumContext::air();
    const double t1 = rotor_thrust(rp.omega_max / 4.0, rp, air).first;
    const double t2 = rotor_thrust(rp.omega_max / 2.0, rp, air).first;
    const bool ok = std::abs(t2 - 4.0 * t1) <= 1e-12 * std::max(1.0, t2);
    add("actuation.rotor_quadratic", ok,
        "T(2w) - 4T(w) = " + format_g9(t2 - 4.0 * t1));
  }

  return report;
}

}  // namespace uaav
