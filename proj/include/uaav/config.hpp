#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "uaav/csv.hpp"
#include "uaav/errors.hpp"
#include "uaav/sim.hpp"

namespace uaav {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

}  // namespace detail

/// Flat dotted-key configuration: one `key = value` per line, `#` comments.
/// Values are scalars, comma-separated vectors, or `t:entry; t:entry`
/// schedules. Overrides are single `key=value` strings applied on top of
/// the file before anything is interpreted, so an invalid override fails
/// the whole load.
class KeyValueConfig {
public:
  KeyValueConfig() = default;

  static KeyValueConfig from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config file: " + path);
    KeyValueConfig cfg;
    cfg.dir_ = std::filesystem::path(path).parent_path().string();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigParseError(path + ":" + std::to_string(line_no) +
                               ": expected key = value");
      const std::string key = detail::trim(line.substr(0, eq));
      const std::string value = detail::trim(line.substr(eq + 1));
      if (key.empty())
        throw ConfigParseError(path + ":" + std::to_string(line_no) +
                               ": empty key");
      cfg.values_[key] = value;
    }
    return cfg;
  }

  void apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
      throw ConfigParseError("override must be key=value: " + assignment);
    const std::string key = detail::trim(assignment.substr(0, eq));
    const std::string value = detail::trim(assignment.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigParseError("override must be key=value: " + assignment);
    values_[key] = value;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& def) const {
    consumed_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? def : it->second;
  }

  double get_double(const std::string& key, double def) const {
    consumed_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return def;
    return parse_double(it->second, key);
  }

  int get_int(const std::string& key, int def) const {
    const double v = get_double(key, static_cast<double>(def));
    return static_cast<int>(std::lround(v));
  }

  bool get_bool(const std::string& key, bool def) const {
    consumed_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return def;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw ConfigParseError("key " + key + ": expected boolean, got '" + v + "'");
  }

  Vec3 get_vec3(const std::string& key, const Vec3& def) const {
    consumed_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return def;
    const auto parts = detail::split(it->second, ',');
    if (parts.size() != 3)
      throw ConfigParseError("key " + key + ": expected three components");
    return Vec3(parse_double(parts[0], key), parse_double(parts[1], key),
                parse_double(parts[2], key));
  }

  /// Schedule entries "t:payload; t:payload" handed to a payload parser.
  template <typename T, typename Fn>
  Schedule<T> get_schedule(const std::string& key, Fn parse_payload) const {
    consumed_.insert(key);
    Schedule<T> out;
    const auto it = values_.find(key);
    if (it == values_.end()) return out;
    for (const std::string& entry : detail::split(it->second, ';')) {
      if (entry.empty()) continue;
      const auto colon = entry.find(':');
      if (colon == std::string::npos)
        throw ConfigParseError("key " + key + ": schedule entry '" + entry +
                               "' missing time");
      const double t = parse_double(detail::trim(entry.substr(0, colon)), key);
      out.entries.emplace_back(t,
                               parse_payload(detail::trim(entry.substr(colon + 1))));
    }
    return out;
  }

  /// Keys present in the file/overrides but never read by the loader.
  std::vector<std::string> unconsumed() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
      if (!consumed_.count(k)) out.push_back(k);
    return out;
  }

  const std::string& dir() const { return dir_; }

  static double parse_double(const std::string& s, const std::string& key) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size())
        throw ConfigParseError("key " + key + ": trailing characters in '" +
                               s + "'");
      return v;
    } catch (const ConfigParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigParseError("key " + key + ": cannot parse number from '" +
                             s + "'");
    }
  }

private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
  std::string dir_;
};

namespace detail {

/// "preset[@k=v,k=v]" with keys f, R, mag, anti.
inline CpgParams parse_cpg_entry(const std::string& payload, double base_f,
                                 double base_R, double base_mag,
                                 bool base_anti, double a_r, double a_x,
                                 double coupling) {
  std::string name = payload;
  double f = base_f, R = base_R, mag = base_mag;
  bool anti = base_anti;
  const auto at = payload.find('@');
  if (at != std::string::npos) {
    name = trim(payload.substr(0, at));
    for (const std::string& opt : split(payload.substr(at + 1), ',')) {
      const auto eq = opt.find('=');
      if (eq == std::string::npos)
        throw ConfigParseError("cpg schedule option must be k=v: " + opt);
      const std::string k = trim(opt.substr(0, eq));
      const std::string v = trim(opt.substr(eq + 1));
      if (k == "f") f = KeyValueConfig::parse_double(v, "cpg.schedule");
      else if (k == "R") R = KeyValueConfig::parse_double(v, "cpg.schedule");
      else if (k == "mag") mag = KeyValueConfig::parse_double(v, "cpg.schedule");
      else if (k == "anti") anti = (v == "1" || v == "true");
      else throw ConfigParseError("unknown cpg schedule option: " + k);
    }
  }
  CpgParams p = behavior_preset(name, f, R, {.magnitude = mag,
                                             .tail_antiphase = anti});
  p.a_r = a_r;
  p.a_x = a_x;
  for (int i = 0; i < kNumWings; ++i)
    for (int j = 0; j < kNumWings; ++j)
      p.coupling_w[i][j] = (i == j) ? 0.0 : coupling;
  return p;
}

}  // namespace detail

/// Build a full scenario from a parsed key-value config. Every key is
/// validated here; unknown keys are an error so that typos and bad
/// overrides cannot pass silently.
inline ScenarioConfig build_scenario(const KeyValueConfig& kv) {
  ScenarioConfig cfg;

  cfg.dt = kv.get_double("sim.dt", cfg.dt);
  cfg.duration = kv.get_double("sim.duration", cfg.duration);
  cfg.record_stride = kv.get_int("sim.record_stride", cfg.record_stride);
  cfg.v_limit = kv.get_double("sim.v_limit", cfg.v_limit);
  cfg.omega_limit = kv.get_double("sim.omega_limit", cfg.omega_limit);

  cfg.model.dynamics.fluid_enabled = kv.get_bool("model.fluid", true);
  cfg.model.dynamics.gyroscopic_sign =
      kv.get_double("model.gyroscopic_sign", 1.0);
  cfg.model.singularity_guard =
      kv.get_double("model.singularity_guard", kDefaultSingularityGuard);
  cfg.model.wing_heave_coupling = kv.get_double(
      "model.wing_heave_coupling", cfg.model.wing_heave_coupling);
  cfg.model.wing_sweep_drag_cd = kv.get_double(
      "model.wing_sweep_drag_cd", cfg.model.wing_sweep_drag_cd);
  cfg.model.wing_travel = kv.get_double("model.wing_travel",
                                        cfg.model.wing_travel);

  auto& mp = cfg.model.medium;
  mp.rho_air = kv.get_double("medium.rho_air", mp.rho_air);
  mp.rho_water = kv.get_double("medium.rho_water", mp.rho_water);
  mp.surface_z = kv.get_double("medium.surface_z", mp.surface_z);
  mp.hysteresis = kv.get_double("medium.hysteresis", mp.hysteresis);
  mp.body_height = kv.get_double("medium.body_height", mp.body_height);

  auto& vp = cfg.model.vehicle;
  vp.m = kv.get_double("vehicle.mass", vp.m);
  vp.J0 = kv.get_vec3("vehicle.inertia", vp.J0);
  vp.Ma = kv.get_vec3("vehicle.added_mass", vp.Ma);
  vp.Ja = kv.get_vec3("vehicle.added_inertia", vp.Ja);
  vp.S = kv.get_double("vehicle.area", vp.S);
  vp.cbar = kv.get_double("vehicle.chord", vp.cbar);
  vp.V_vol = kv.get_double("vehicle.volume", vp.V_vol);
  vp.r_B = kv.get_vec3("vehicle.cb_offset", vp.r_B);
  vp.a = kv.get_double("vehicle.arm_a", vp.a);
  vp.b = kv.get_double("vehicle.arm_b", vp.b);
  vp.c = kv.get_double("vehicle.arm_c", vp.c);
  vp.wing_pitch_arm = kv.get_double("vehicle.wing_pitch_arm", vp.wing_pitch_arm);
  vp.wing_chord_arm = kv.get_double("vehicle.wing_chord_arm", vp.wing_chord_arm);
  vp.rotor_clearance = kv.get_double("vehicle.rotor_clearance", vp.rotor_clearance);
  vp.g = kv.get_double("vehicle.gravity", vp.g);

  auto& rp = cfg.model.rotor;
  rp.C_T_air = kv.get_double("rotor.ct_air", rp.C_T_air);
  rp.C_T_water = kv.get_double("rotor.ct_water", rp.C_T_water);
  rp.C_Q_air = kv.get_double("rotor.cq_air", rp.C_Q_air);
  rp.C_Q_water = kv.get_double("rotor.cq_water", rp.C_Q_water);
  rp.omega_max = kv.get_double("rotor.omega_max", rp.omega_max);
  rp.gamma_min = kv.get_double("rotor.gamma_min", rp.gamma_min);
  rp.gamma_max = kv.get_double("rotor.gamma_max", rp.gamma_max);

  for (int i = 0; i < kNumWings; ++i) {
    const std::string pre = "wing" + std::to_string(i + 1) + ".";
    auto& w = cfg.model.wings[static_cast<std::size_t>(i)];
    w.S = kv.get_double(pre + "area", w.S);
    w.Cfx_bar = kv.get_double(pre + "cfx_bar", w.Cfx_bar);
    w.Cfz_bar = kv.get_double(pre + "cfz_bar", w.Cfz_bar);
    w.C_n_inst = kv.get_double(pre + "cn_inst", w.C_n_inst);
  }

  auto resolve = [&](const std::string& rel) {
    std::filesystem::path p(rel);
    if (p.is_absolute() || kv.dir().empty()) return rel;
    return (std::filesystem::path(kv.dir()) / p).string();
  };
  // analytic-blend constants are plain config inputs; a CSV table, when
  // given, replaces the generated one entirely
  auto read_spec = [&](const std::string& pre, FlatPlateSpec spec) {
    spec.lift_slope = kv.get_double(pre + "lift_slope", spec.lift_slope);
    spec.stall_deg = kv.get_double(pre + "stall_deg", spec.stall_deg);
    spec.cd0 = kv.get_double(pre + "cd0", spec.cd0);
    spec.induced_k = kv.get_double(pre + "induced_k", spec.induced_k);
    spec.cd_plate = kv.get_double(pre + "cd_plate", spec.cd_plate);
    spec.cy_slope = kv.get_double(pre + "cy_slope", spec.cy_slope);
    spec.cm_slope = kv.get_double(pre + "cm_slope", spec.cm_slope);
    spec.cn_slope = kv.get_double(pre + "cn_slope", spec.cn_slope);
    return spec;
  };
  cfg.model.aero_air =
      build_flat_plate_table(read_spec("aero.air.", kDefaultAirSpec));
  cfg.model.aero_water =
      build_flat_plate_table(read_spec("aero.water.", kDefaultWaterSpec));
  if (const std::string p = kv.get_string("aero.air_table", ""); !p.empty())
    cfg.model.aero_air = load_aero_table_csv(resolve(p));
  if (const std::string p = kv.get_string("aero.water_table", ""); !p.empty())
    cfg.model.aero_water = load_aero_table_csv(resolve(p));

  cfg.initial.P = kv.get_vec3("initial.position", cfg.initial.P);
  const Vec3 att = kv.get_vec3("initial.attitude_deg", Vec3::Zero());
  cfg.initial.Theta = {att[0] * M_PI / 180.0, att[1] * M_PI / 180.0,
                       att[2] * M_PI / 180.0};
  cfg.initial.V = kv.get_vec3("initial.velocity", cfg.initial.V);
  cfg.initial.Omega = kv.get_vec3("initial.angular_rate", cfg.initial.Omega);

  cfg.mode_schedule = kv.get_schedule<ControlMode>(
      "mode.schedule", [](const std::string& s) { return mode_from_name(s); });
  if (cfg.mode_schedule.empty())
    cfg.mode_schedule.entries.emplace_back(0.0, ControlMode::VerticalFlight);

  const double cpg_f = kv.get_double("cpg.f", 15.0 / (2.0 * M_PI));
  const double cpg_R = kv.get_double("cpg.R", 0.5);
  const double cpg_mag = kv.get_double("cpg.magnitude", 0.3);
  const bool cpg_anti = kv.get_bool("cpg.antiphase", false);
  const double a_r = kv.get_double("cpg.a_r", 20.0);
  const double a_x = kv.get_double("cpg.a_x", 20.0);
  const double coupling = kv.get_double("cpg.coupling", 4.0);
  cfg.cpg_schedule = kv.get_schedule<CpgParams>(
      "cpg.schedule", [&](const std::string& s) {
        return detail::parse_cpg_entry(s, cpg_f, cpg_R, cpg_mag, cpg_anti, a_r,
                                       a_x, coupling);
      });
  if (cfg.cpg_schedule.empty()) {
    cfg.cpg_schedule.entries.emplace_back(
        0.0, detail::parse_cpg_entry("forward", cpg_f, cpg_R, cpg_mag,
                                     cpg_anti, a_r, a_x, coupling));
  }

  cfg.pilot_schedule = kv.get_schedule<PilotInput>(
      "pilot.schedule", [](const std::string& s) {
        std::stringstream ss(s);
        PilotInput p;
        ss >> p.throttle >> p.roll >> p.pitch >> p.yaw;
        if (ss.fail())
          throw ConfigParseError("pilot.schedule entry needs four values: " + s);
        return p;
      });

  cfg.target_schedule = kv.get_schedule<Vec3>(
      "target.schedule", [](const std::string& s) {
        std::stringstream ss(s);
        Vec3 v;
        ss >> v[0] >> v[1] >> v[2];
        if (ss.fail())
          throw ConfigParseError("target.schedule entry needs three values: " + s);
        return v;
      });
  if (cfg.target_schedule.empty())
    cfg.target_schedule.entries.emplace_back(0.0, cfg.initial.P);
  cfg.target_yaw = kv.get_double("target.yaw_deg", 0.0) * M_PI / 180.0;

  auto& g = cfg.gains;
  const double pos_kp = kv.get_double("pid.pos_kp", g.pos[0].kp);
  const double pos_ki = kv.get_double("pid.pos_ki", g.pos[0].ki);
  const double pos_kd = kv.get_double("pid.pos_kd", g.pos[0].kd);
  const double vel_kp = kv.get_double("pid.vel_kp", g.vel[0].kp);
  const double vel_ki = kv.get_double("pid.vel_ki", g.vel[0].ki);
  const double vel_kd = kv.get_double("pid.vel_kd", g.vel[0].kd);
  for (int i = 0; i < 3; ++i) {
    g.pos[i] = {pos_kp, pos_ki, pos_kd};
    g.vel[i] = {vel_kp, vel_ki, vel_kd};
  }
  g.vel_limit = kv.get_double("pid.vel_limit", g.vel_limit);
  g.accel_limit = kv.get_double("pid.accel_limit", g.accel_limit);
  g.integrator_limit = kv.get_double("pid.integrator_limit", g.integrator_limit);
  g.roll_kp = kv.get_double("pid.roll_kp", g.roll_kp);
  g.roll_kd = kv.get_double("pid.roll_kd", g.roll_kd);
  g.yaw_kp = kv.get_double("pid.yaw_kp", g.yaw_kp);
  g.yaw_kd = kv.get_double("pid.yaw_kd", g.yaw_kd);

  auto& mx = cfg.mixer;
  mx.throttle_scale = kv.get_double("mixer.throttle_scale", mx.throttle_scale);
  mx.yaw_scale = kv.get_double("mixer.yaw_scale", mx.yaw_scale);
  mx.pitch_scale = kv.get_double("mixer.pitch_scale", mx.pitch_scale);
  mx.roll_scale = kv.get_double("mixer.roll_scale", mx.roll_scale);

  if (const auto unknown = kv.unconsumed(); !unknown.empty()) {
    std::string msg = "unknown config key(s):";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigParseError(msg);
  }

  if (!(cfg.dt > 0.0)) throw ConfigParseError("sim.dt must be positive");
  if (cfg.duration < 0.0)
    throw ConfigParseError("sim.duration must be nonnegative");
  if (mp.hysteresis < 0.0)
    throw ConfigParseError("medium.hysteresis must be nonnegative");
  if (const std::string bad = check_vehicle_params(vp, mp.rho_water);
      !bad.empty())
    throw ConfigParseError("vehicle invariant violated: " + bad);

  return cfg;
}

/// Load a scenario file and apply `key=value` overrides before validation.
inline ScenarioConfig load_scenario(const std::string& path,
                                    const std::vector<std::string>& overrides = {}) {
  KeyValueConfig kv = KeyValueConfig::from_file(path);
  for (const auto& o : overrides) kv.apply_override(o);
  return build_scenario(kv);
}

}  // namespace uaav
