#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "uaav/sim.hpp"

namespace uaav {

/// Extract one channel over t >= t_min.
inline std::vector<double> channel(
    const TrajectoryRecord& rec, double t_min,
    const std::function<double(const TrajectorySample&)>& get) {
  std::vector<double> out;
  for (const auto& s : rec.samples)
    if (s.t >= t_min - 1e-12) out.push_back(get(s));
  return out;
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

inline double peak_to_peak(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double lo = v.front(), hi = v.front();
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return hi - lo;
}

/// Dominant frequency of a uniformly sampled signal by direct DFT over
/// k = 1..N/2 (mean removed). Returns the peak frequency; bin width is
/// 1/(N*dt). Good enough for the short traces the simulator produces.
inline double dominant_frequency(const std::vector<double>& v, double dt,
                                 double* bin_width = nullptr,
                                 double* peak_magnitude = nullptr) {
  const std::size_t n = v.size();
  if (bin_width) *bin_width = (n > 0 && dt > 0.0)
                                  ? 1.0 / (static_cast<double>(n) * dt)
                                  : 0.0;
  if (n < 4 || dt <= 0.0) {
    if (peak_magnitude) *peak_magnitude = 0.0;
    return 0.0;
  }
  const double mu = mean(v);
  double best_mag = -1.0;
  std::size_t best_k = 1;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    double re = 0.0, im = 0.0;
    const double w = 2.0 * M_PI * static_cast<double>(k) /
                     static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = v[i] - mu;
      re += x * std::cos(w * static_cast<double>(i));
      im -= x * std::sin(w * static_cast<double>(i));
    }
    const double mag = re * re + im * im;
    if (mag > best_mag) {
      best_mag = mag;
      best_k = k;
    }
  }
  if (peak_magnitude) *peak_magnitude = std::sqrt(best_mag);
  return static_cast<double>(best_k) / (static_cast<double>(n) * dt);
}

/// Signal period from mean-crossing times with linear interpolation,
/// averaged over all full cycles found. Returns 0 when fewer than two
/// rising crossings exist.
inline double mean_crossing_period(const std::vector<double>& v, double dt) {
  if (v.size() < 3) return 0.0;
  const double mu = mean(v);
  std::vector<double> rising;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double a = v[i - 1] - mu, b = v[i] - mu;
    if (a < 0.0 && b >= 0.0) {
      const double frac = a / (a - b);
      rising.push_back((static_cast<double>(i - 1) + frac) * dt);
    }
  }
  if (rising.size() < 2) return 0.0;
  return (rising.back() - rising.front()) /
         static_cast<double>(rising.size() - 1);
}

/// Summary metrics of one run, computed over t >= skip.
struct RunMetrics {
  double mean_surge{0.0};     // mean body-x velocity (m/s)
  double pitch_p2p{0.0};      // pitch peak-to-peak (rad)
  double roll_mean{0.0};      // mean roll angle (rad)
  double yaw_peak_hz{0.0};    // dominant yaw-rate frequency (Hz)
  double yaw_bin_hz{0.0};     // frequency resolution of the estimate
};

inline RunMetrics compute_metrics(const TrajectoryRecord& rec, double skip) {
  RunMetrics m;
  if (rec.samples.size() < 2) return m;
  const double dt_s = rec.samples[1].t - rec.samples[0].t;
  const auto u = channel(rec, skip, [](const auto& s) { return s.V[0]; });
  const auto pitch = channel(rec, skip, [](const auto& s) { return s.att[1]; });
  const auto roll = channel(rec, skip, [](const auto& s) { return s.att[0]; });
  const auto r = channel(rec, skip, [](const auto& s) { return s.Omega[2]; });
  m.mean_surge = mean(u);
  m.pitch_p2p = peak_to_peak(pitch);
  m.roll_mean = mean(roll);
  m.yaw_peak_hz = dominant_frequency(r, dt_s, &m.yaw_bin_hz);
  return m;
}

}  // namespace uaav
