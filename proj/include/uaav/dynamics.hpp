#pragma once

#include <cmath>
#include <utility>

#include "uaav/aero.hpp"
#include "uaav/errors.hpp"
#include "uaav/spatial.hpp"
#include "uaav/types.hpp"

namespace uaav {

/// Geometric, inertial, hydrodynamic and actuator-geometry constants of the
/// vehicle. Added mass/inertia are stored as positive magnitudes; the
/// effective matrices are M0 + k*Ma and J0 + k*Ja (mass-increasing in water).
struct VehicleParams {
  double m{1.61};                      // mass (kg)
  Vec3 J0{0.035, 0.045, 0.055};        // diagonal inertia (kg m^2)
  Vec3 Ma{0.10, 1.50, 2.20};           // added mass magnitudes (kg)
  Vec3 Ja{0.005, 0.012, 0.012};        // added inertia magnitudes (kg m^2)
  double S{0.076};                     // reference wing area (m^2)
  double cbar{0.11};                   // characteristic length (m)
  double V_vol{1.625e-3};              // displaced volume (m^3)
  Vec3 r_B{0.0, 0.0, 0.02};            // center of buoyancy offset (m)
  double a{0.1725};                    // rotor/wing lateral arm (m)
  double b{0.0};                       // rotor pitch arm; CG sits on thrust axis 1
  double c{0.28};                      // tail arm to thrust axis 2 (m)
  double wing_pitch_arm{0.045};        // wing pressure-center arm for flapping (m)
  double wing_chord_arm{0.06};         // chord arm feeding pitch-rate wash (m)
  double rotor_clearance{0.05};        // rotors sit this far above the hull (m)
  double g{9.81};                      // gravity (m/s^2)

  double weight() const { return m * g; }
};

/// Binary medium flag plus densities and the submergence fraction that
/// scales buoyancy through the surface crossing (1 fully submerged,
/// 0 fully in air; defaults to the flag itself).
struct MediumContext {
  int k{0};                  // 0 = air, 1 = water
  double rho{1.225};         // density of the active medium (kg/m^3)
  double rho_water{1000.0};  // water density for buoyancy (kg/m^3)
  double submergence{0.0};   // fraction of displaced volume in water

  static MediumContext air(double rho_a = 1.225, double rho_w = 1000.0) {
    return {0, rho_a, rho_w, 0.0};
  }
  static MediumContext water(double rho_w = 1000.0) {
    return {1, rho_w, rho_w, 1.0};
  }
};

/// Validate the vehicle mass/buoyancy invariants. Returns the name of the
/// first violated invariant, empty when all hold.
inline std::string check_vehicle_params(const VehicleParams& p,
                                        double rho_water = 1000.0) {
  if (!(p.m > 0.0)) return "vehicle.mass_positive";
  for (int i = 0; i < 3; ++i) {
    if (!(p.J0[i] > 0.0)) return "vehicle.inertia_positive";
    if (!(p.m + p.Ma[i] > 0.0) || !(p.J0[i] + p.Ja[i] > 0.0))
      return "vehicle.effective_mass_positive_definite";
  }
  if (!(rho_water * p.g * p.V_vol > p.m * p.g))
    return "vehicle.positive_buoyancy";
  return {};
}

/// Flow angles and speed from the body velocity: alpha = atan2(w, u),
/// beta = asin(v/|V|), Vf = |V|. Angles fall back to zero below eps.
inline std::tuple<double, double, double> flow_angles(const Vec3& V,
                                                      double eps = 1e-6) {
  const double vf = V.norm();
  if (vf < eps) return {0.0, 0.0, vf};
  const double alpha = std::atan2(V[2], V[0]);
  const double beta = std::asin(std::clamp(V[1] / vf, -1.0, 1.0));
  return {alpha, beta, vf};
}

/// Fluid force and moment. The force is the wind-to-body resolution of the
/// (drag, side, lift) triplet at dynamic pressure 0.5*rho*Vf^2; the moment
/// is qbar*S*cbar*(Cl, Cm, Cn). The dynamics subtract this wrench.
inline Wrench fluid_wrench(double alpha, double beta, double vf,
                           const MediumContext& medium,
                           const AeroCoefficients& coeffs,
                           const VehicleParams& params) {
  Wrench w;
  if (vf <= 0.0) return w;
  const AeroSample s = coeffs.lookup(alpha, beta);
  const double qbar = 0.5 * medium.rho * vf * vf;
  const double D = qbar * params.S * s.CD;
  const double Y = qbar * params.S * s.CY;
  const double L = qbar * params.S * s.CL;
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double cb = std::cos(beta), sb = std::sin(beta);
  w.F = Vec3(ca * cb * D - ca * sb * Y - sa * L,
             sb * D + cb * Y,
             sa * cb * D - sa * sb * Y + ca * L);
  w.M = qbar * params.S * params.cbar * Vec3(s.Cl, s.Cm, s.Cn);
  return w;
}

/// Restoring force and moment in the body frame: gravity plus buoyancy
/// rotated into {B}, and the buoyancy moment about the CB offset. Buoyancy
/// scales with the submergence fraction (binary in the plain medium
/// contexts, ramped by the simulator through the surface).
inline Wrench restoring_wrench(const EulerZXY& att, const MediumContext& medium,
                               const VehicleParams& params) {
  const Mat3 Reb = rotation_earth_to_body(att);
  const Vec3 f_g(0.0, 0.0, -params.m * params.g);
  const Vec3 f_b(0.0, 0.0,
                 medium.rho_water * params.g * params.V_vol * medium.submergence);
  Wrench w;
  const Vec3 fb_body = Reb * f_b;
  w.F = Reb * f_g + fb_body;
  w.M = params.r_B.cross(fb_body);
  return w;
}

struct DynamicsOptions {
  double gyroscopic_sign{1.0};  // flips the (Jeff*Omega) x Omega term
  bool fluid_enabled{true};
};

/// Newton-Euler accelerations with medium-dependent added mass. Solves
///   Meff*Vdot = F_ctl - F_fluid + F_restoring - (Meff*Omega) x V
///   Jeff*Omegadot = M_ctl - M_fluid + M_restoring - k*(Ma.*V) x V
///                   + s_g*(Jeff*Omega) x Omega
/// with Meff = M0 + k*Ma, Jeff = J0 + k*Ja (diagonal).
inline std::pair<Vec3, Vec3> dynamics_derivative(
    const RigidBodyState& state, const Wrench& control,
    const MediumContext& medium, const AeroCoefficients& coeffs,
    const VehicleParams& params, const DynamicsOptions& opt = {}) {
  const double k = medium.k ? 1.0 : 0.0;
  const Vec3 meff(params.m + k * params.Ma[0], params.m + k * params.Ma[1],
                  params.m + k * params.Ma[2]);
  const Vec3 jeff(params.J0[0] + k * params.Ja[0],
                  params.J0[1] + k * params.Ja[1],
                  params.J0[2] + k * params.Ja[2]);
  for (int i = 0; i < 3; ++i) {
    if (!(meff[i] > 0.0) || !(jeff[i] > 0.0)) {
      throw NonPositiveDefiniteMass(
          "dynamics_derivative: effective mass/inertia not positive definite");
    }
  }

  Wrench fluid;
  if (opt.fluid_enabled) {
    const auto [alpha, beta, vf] = flow_angles(state.V);
    fluid = fluid_wrench(alpha, beta, vf, medium, coeffs, params);
  }
  const Wrench restoring = restoring_wrench(state.Theta, medium, params);

  const Vec3 coriolis = (meff.cwiseProduct(state.Omega)).cross(state.V);
  const Vec3 rhs_f = control.F - fluid.F + restoring.F - coriolis;

  const Vec3 munk = k * (params.Ma.cwiseProduct(state.V)).cross(state.V);
  const Vec3 gyro = (jeff.cwiseProduct(state.Omega)).cross(state.Omega);
  const Vec3 rhs_m =
      control.M - fluid.M + restoring.M - munk + opt.gyroscopic_sign * gyro;

  return {rhs_f.cwiseQuotient(meff), rhs_m.cwiseQuotient(jeff)};
}

}  // namespace uaav
