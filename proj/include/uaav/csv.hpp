#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "uaav/aero.hpp"
#include "uaav/errors.hpp"
#include "uaav/sim.hpp"

namespace uaav {

inline std::string format_g9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline const char* trajectory_csv_header() {
  return "t,x,y,z,phi,theta,psi,u,v,w,p,q,r,mode,k,omega1,omega2,gamma1,"
         "gamma2,theta_w1,theta_w2,theta_w3,Fx,Fy,Fz,Mx,My,Mz";
}

/// Render a trajectory as CSV text: fixed column order, floating point with
/// nine significant digits. Byte-stable for identical records.
inline std::string trajectory_to_csv(const TrajectoryRecord& record) {
  std::string out = trajectory_csv_header();
  out += '\n';
  for (const auto& s : record.samples) {
    const double cols[] = {s.t,        s.P[0],     s.P[1],     s.P[2],
                           s.att[0],   s.att[1],   s.att[2],   s.V[0],
                           s.V[1],     s.V[2],     s.Omega[0], s.Omega[1],
                           s.Omega[2]};
    for (double c : cols) {
      out += format_g9(c);
      out += ',';
    }
    out += std::to_string(s.mode);
    out += ',';
    out += std::to_string(s.k);
    const double tail[] = {s.rotor.omega1, s.rotor.omega2, s.rotor.gamma1,
                           s.rotor.gamma2, s.wing_theta[0], s.wing_theta[1],
                           s.wing_theta[2], s.control.F[0], s.control.F[1],
                           s.control.F[2], s.control.M[0], s.control.M[1],
                           s.control.M[2]};
    for (double c : tail) {
      out += ',';
      out += format_g9(c);
    }
    out += '\n';
  }
  return out;
}

inline void write_trajectory_csv(const TrajectoryRecord& record,
                                 const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open output file: " + path);
  const std::string text = trajectory_to_csv(record);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw IoError("write failed: " + path);
}

/// Oscillator trace: wing angles plus the underlying amplitude, offset and
/// phase states, one row per sample.
inline std::string cpg_trace_to_csv(const TrajectoryRecord& record) {
  std::string out =
      "t,theta_w1,theta_w2,theta_w3,r1,r2,r3,x1,x2,x3,phi1,phi2,phi3";
  out += '\n';
  for (const auto& s : record.samples) {
    out += format_g9(s.t);
    for (double v : s.wing_theta) {
      out += ',';
      out += format_g9(v);
    }
    for (const auto& arr : {s.cpg_r, s.cpg_x, s.cpg_phi}) {
      for (double v : arr) {
        out += ',';
        out += format_g9(v);
      }
    }
    out += '\n';
  }
  return out;
}

inline void write_cpg_trace_csv(const TrajectoryRecord& record,
                                const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open output file: " + path);
  const std::string text = cpg_trace_to_csv(record);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw IoError("write failed: " + path);
}

/// Load a coefficient table from CSV with columns
/// alpha_deg,beta_deg,CD,CY,CL,Cl,Cm,Cn. Rows may come in any order but
/// must form a complete rectangular (alpha, beta) grid.
inline AeroCoefficients load_aero_table_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open coefficient table: " + path);

  std::string line;
  if (!std::getline(f, line))
    throw ConfigParseError("coefficient table is empty: " + path);

  struct Row {
    double a, b;
    AeroSample s;
  };
  std::vector<Row> rows;
  std::size_t line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    Row r;
    char comma;
    ss >> r.a >> comma >> r.b >> comma >> r.s.CD >> comma >> r.s.CY >> comma >>
        r.s.CL >> comma >> r.s.Cl >> comma >> r.s.Cm >> comma >> r.s.Cn;
    if (ss.fail())
      throw ConfigParseError(path + ":" + std::to_string(line_no) +
                             ": malformed coefficient row");
    r.a *= M_PI / 180.0;
    r.b *= M_PI / 180.0;
    rows.push_back(r);
  }
  if (rows.empty())
    throw ConfigParseError("coefficient table has no data rows: " + path);

  auto collect_axis = [&](auto proj) {
    std::vector<double> ax;
    for (const auto& r : rows) {
      const double v = proj(r);
      bool found = false;
      for (double x : ax)
        if (std::abs(x - v) < 1e-12) found = true;
      if (!found) ax.push_back(v);
    }
    std::sort(ax.begin(), ax.end());
    return ax;
  };
  const std::vector<double> alphas = collect_axis([](const Row& r) { return r.a; });
  const std::vector<double> betas = collect_axis([](const Row& r) { return r.b; });

  std::vector<AeroSample> samples(alphas.size() * betas.size());
  std::vector<char> filled(samples.size(), 0);
  auto index_of = [](const std::vector<double>& ax, double v) {
    for (std::size_t i = 0; i < ax.size(); ++i)
      if (std::abs(ax[i] - v) < 1e-12) return i;
    return ax.size();
  };
  for (const auto& r : rows) {
    const std::size_t ia = index_of(alphas, r.a);
    const std::size_t ib = index_of(betas, r.b);
    const std::size_t idx = ia * betas.size() + ib;
    if (filled[idx])
      throw ConfigParseError("duplicate coefficient grid point in " + path);
    samples[idx] = r.s;
    filled[idx] = 1;
  }
  for (char c : filled)
    if (!c)
      throw ConfigParseError("coefficient grid is not rectangular: " + path);

  return AeroCoefficients(alphas, betas, std::move(samples));
}

}  // namespace uaav
