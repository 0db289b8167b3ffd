#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "uaav/errors.hpp"

namespace uaav {

/// One row of aerodynamic/hydrodynamic coefficients.
struct AeroSample {
  double CD{0.0};  // drag
  double CY{0.0};  // side force
  double CL{0.0};  // lift
  double Cl{0.0};  // roll moment
  double Cm{0.0};  // pitch moment
  double Cn{0.0};  // yaw moment
};

/// Coefficient lookup table over (alpha, beta), bilinear interpolation on a
/// rectangular grid. One instance per medium. Queries outside the grid
/// domain raise CoefficientOutOfRange.
class AeroCoefficients {
public:
  AeroCoefficients() = default;

  AeroCoefficients(std::vector<double> alphas, std::vector<double> betas,
                   std::vector<AeroSample> samples)
      : alphas_(std::move(alphas)),
        betas_(std::move(betas)),
        samples_(std::move(samples)) {
    if (alphas_.size() < 2 || betas_.size() < 2 ||
        samples_.size() != alphas_.size() * betas_.size()) {
      throw ConfigParseError("coefficient table: incomplete grid");
    }
  }

  AeroSample lookup(double alpha, double beta) const {
    const auto [ia, ta] = bracket(alphas_, alpha, "alpha");
    const auto [ib, tb] = bracket(betas_, beta, "beta");
    const AeroSample& s00 = at(ia, ib);
    const AeroSample& s10 = at(ia + 1, ib);
    const AeroSample& s01 = at(ia, ib + 1);
    const AeroSample& s11 = at(ia + 1, ib + 1);
    AeroSample out;
    auto lerp2 = [&](double a, double b, double c, double d) {
      const double lo = a + (b - a) * ta;
      const double hi = c + (d - c) * ta;
      return lo + (hi - lo) * tb;
    };
    out.CD = lerp2(s00.CD, s10.CD, s01.CD, s11.CD);
    out.CY = lerp2(s00.CY, s10.CY, s01.CY, s11.CY);
    out.CL = lerp2(s00.CL, s10.CL, s01.CL, s11.CL);
    out.Cl = lerp2(s00.Cl, s10.Cl, s01.Cl, s11.Cl);
    out.Cm = lerp2(s00.Cm, s10.Cm, s01.Cm, s11.Cm);
    out.Cn = lerp2(s00.Cn, s10.Cn, s01.Cn, s11.Cn);
    return out;
  }

  /// Table sanity: CD nonnegative everywhere, CL(0, .) = 0 for the symmetric
  /// section. Returns the name of the first violated property, empty if ok.
  std::string check() const {
    for (const auto& s : samples_) {
      if (!(s.CD >= 0.0)) return "aero.drag_nonnegative";
    }
    const auto it = std::find_if(alphas_.begin(), alphas_.end(),
                                 [](double a) { return a == 0.0; });
    if (it != alphas_.end()) {
      const std::size_t ia = static_cast<std::size_t>(it - alphas_.begin());
      for (std::size_t ib = 0; ib < betas_.size(); ++ib) {
        if (std::abs(at(ia, ib).CL) > 1e-12) return "aero.symmetric_zero_lift";
      }
    }
    return {};
  }

  const std::vector<double>& alphas() const { return alphas_; }
  const std::vector<double>& betas() const { return betas_; }

private:
  const AeroSample& at(std::size_t ia, std::size_t ib) const {
    return samples_[ia * betas_.size() + ib];
  }

  static std::pair<std::size_t, double> bracket(const std::vector<double>& ax,
                                                double x, const char* name) {
    if (!(x >= ax.front() && x <= ax.back())) {
      throw CoefficientOutOfRange(std::string("coefficient lookup: ") + name +
                                  " = " + std::to_string(x) +
                                  " outside table domain [" +
                                  std::to_string(ax.front()) + ", " +
                                  std::to_string(ax.back()) + "]");
    }
    auto hi = std::upper_bound(ax.begin(), ax.end(), x);
    if (hi == ax.end()) --hi;
    const std::size_t i = static_cast<std::size_t>(hi - ax.begin()) - 1;
    const double t = (x - ax[i]) / (ax[i + 1] - ax[i]);
    return {i, t};
  }

  std::vector<double> alphas_;   // rad, ascending
  std::vector<double> betas_;    // rad, ascending
  std::vector<AeroSample> samples_;  // row-major over (alpha, beta)
};

/// Parameters of the flat-plate / thin-airfoil blend used to generate the
/// default tables. Lift is linear up to stall, ramps onto the flat-plate
/// sin(2a) law, and drag follows CD0 + K*CL^2 plus a sin^2 plate term.
struct FlatPlateSpec {
  double lift_slope;    // 1/rad, pre-stall
  double stall_deg;     // stall angle (deg)
  double cd0;           // parasitic drag
  double induced_k;     // induced-drag factor on CL^2
  double cd_plate;      // normal-plate drag scale (sin^2 terms)
  double cy_slope;      // side-force vs sin(beta)
  double cm_slope;      // pitch-stiffness vs sin(a)cos(a)
  double cn_slope;      // yaw-stiffness vs sin(beta)
};

namespace detail {

inline double blend_lift(double alpha, const FlatPlateSpec& spec) {
  const double sgn = alpha < 0.0 ? -1.0 : 1.0;
  const double a = std::abs(alpha);
  const double a_stall = spec.stall_deg * M_PI / 180.0;
  const double a_flat = 2.0 * a_stall;  // fully on the plate law past here
  const double plate = 1.1 * std::sin(2.0 * a);
  if (a <= a_stall) return sgn * spec.lift_slope * a;
  if (a >= a_flat) return sgn * plate;
  // linear ramp from the stalled linear value onto the plate law
  const double t = (a - a_stall) / (a_flat - a_stall);
  const double cl_stall = spec.lift_slope * a_stall;
  const double cl_flat = 1.1 * std::sin(2.0 * a_flat);
  return sgn * ((1.0 - t) * cl_stall + t * cl_flat);
}

}  // namespace detail

/// Sample the analytic blend onto a rectangular grid covering the full
/// (alpha, beta) domain.
inline AeroCoefficients build_flat_plate_table(const FlatPlateSpec& spec,
                                               double alpha_step_deg = 2.0,
                                               double beta_step_deg = 3.0) {
  std::vector<double> alphas, betas;
  for (double a = -180.0; a <= 180.0 + 1e-9; a += alpha_step_deg)
    alphas.push_back(a * M_PI / 180.0);
  for (double b = -90.0; b <= 90.0 + 1e-9; b += beta_step_deg)
    betas.push_back(b * M_PI / 180.0);

  std::vector<AeroSample> samples;
  samples.reserve(alphas.size() * betas.size());
  for (double alpha : alphas) {
    const double cl = detail::blend_lift(alpha, spec);
    for (double beta : betas) {
      AeroSample s;
      s.CL = cl;
      const double sa = std::sin(alpha), sb = std::sin(beta);
      s.CD = spec.cd0 + spec.induced_k * cl * cl + spec.cd_plate * sa * sa +
             0.5 * spec.cd_plate * sb * sb;
      s.CY = spec.cy_slope * sb;
      s.Cl = 0.0;
      s.Cm = spec.cm_slope * sa * std::cos(alpha);
      s.Cn = -spec.cn_slope * sb;
      samples.push_back(s);
    }
  }
  return AeroCoefficients(std::move(alphas), std::move(betas),
                          std::move(samples));
}

/// Air-table constants. The lift slope is set so the wing carries the
/// vehicle weight at the design cruise point (18.6 m/s, 10 deg incidence).
inline constexpr FlatPlateSpec kDefaultAirSpec{.lift_slope = 5.6192,
                                               .stall_deg = 15.0,
                                               .cd0 = 0.035,
                                               .induced_k = 0.06,
                                               .cd_plate = 1.3,
                                               .cy_slope = 0.9,
                                               .cm_slope = 0.8,
                                               .cn_slope = 0.4};

/// Water-table constants; higher parasitic drag, same section behavior.
inline constexpr FlatPlateSpec kDefaultWaterSpec{.lift_slope = 5.6192,
                                                 .stall_deg = 15.0,
                                                 .cd0 = 0.40,
                                                 .induced_k = 0.08,
                                                 .cd_plate = 1.5,
                                                 .cy_slope = 0.9,
                                                 .cm_slope = 0.8,
                                                 .cn_slope = 0.4};

inline AeroCoefficients default_air_table() {
  return build_flat_plate_table(kDefaultAirSpec);
}

inline AeroCoefficients default_water_table() {
  return build_flat_plate_table(kDefaultWaterSpec);
}

}  // namespace uaav
