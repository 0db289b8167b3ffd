// Command-line front end: run scenarios, sweep parameter grids, print the
// flapping behavior presets, and run the built-in validation suite.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "uaav/analysis.hpp"
#include "uaav/config.hpp"
#include "uaav/csv.hpp"
#include "uaav/sim.hpp"
#include "uaav/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitIo = 4;

int classify(const std::exception& e) {
  if (dynamic_cast<const uaav::ConfigParseError*>(&e)) return kExitConfig;
  if (dynamic_cast<const uaav::NumericalDivergence*>(&e)) return kExitDivergence;
  if (dynamic_cast<const uaav::IoError*>(&e)) return kExitIo;
  return kExitError;
}

int cmd_run(const std::string& config_path, const std::string& output_path,
            const std::string& cpg_trace_path,
            const std::vector<std::string>& overrides) {
  try {
    const uaav::ScenarioConfig cfg = uaav::load_scenario(config_path, overrides);
    const uaav::TrajectoryRecord rec = uaav::run_scenario(cfg);
    uaav::write_trajectory_csv(rec, output_path);
    if (!cpg_trace_path.empty()) uaav::write_cpg_trace_csv(rec, cpg_trace_path);
    std::printf("wrote %zu samples to %s\n", rec.samples.size(),
                output_path.c_str());
    for (const auto& tr : rec.transitions) {
      std::printf("  t=%.3f s: %s -> %s\n", tr.t,
                  uaav::mode_name(tr.from).c_str(),
                  uaav::mode_name(tr.to).c_str());
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return classify(e);
  }
}

struct GridAxis {
  std::string key;
  std::vector<std::string> values;
};

std::vector<GridAxis> parse_grid(const std::string& spec) {
  std::vector<GridAxis> axes;
  if (spec.empty()) return axes;
  for (const std::string& part : uaav::detail::split(spec, ';')) {
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos)
      throw uaav::ConfigParseError("grid axis must be key=v1,v2,...: " + part);
    GridAxis axis;
    axis.key = uaav::detail::trim(part.substr(0, eq));
    axis.values = uaav::detail::split(part.substr(eq + 1), ',');
    if (axis.key.empty() || axis.values.empty())
      throw uaav::ConfigParseError("empty grid axis: " + part);
    axes.push_back(axis);
  }
  return axes;
}

struct SweepPoint {
  std::vector<std::string> assignments;
  uaav::RunMetrics metrics;
  bool ok{false};
  std::string status;
};

int cmd_sweep(const std::string& config_path, const std::string& grid_spec,
              const std::string& out_dir,
              const std::vector<std::string>& base_overrides, int jobs,
              double skip) {
  std::vector<GridAxis> axes;
  try {
    axes = parse_grid(grid_spec);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create %s: %s\n", out_dir.c_str(),
                 ec.message().c_str());
    return kExitIo;
  }

  // cartesian product, row-major over the axes
  std::vector<SweepPoint> points;
  std::size_t total = axes.empty() ? 0 : 1;
  for (const auto& a : axes) total *= a.values.size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    SweepPoint p;
    std::size_t rem = idx;
    for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
      const std::size_t n = it->values.size();
      p.assignments.push_back(it->key + "=" + it->values[rem % n]);
      rem /= n;
    }
    std::reverse(p.assignments.begin(), p.assignments.end());
    points.push_back(std::move(p));
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= points.size()) return;
      SweepPoint& p = points[idx];
      try {
        std::vector<std::string> overrides = base_overrides;
        overrides.insert(overrides.end(), p.assignments.begin(),
                         p.assignments.end());
        const uaav::ScenarioConfig cfg =
            uaav::load_scenario(config_path, overrides);
        const uaav::TrajectoryRecord rec = uaav::run_scenario(cfg);
        char name[32];
        std::snprintf(name, sizeof(name), "point_%03zu.csv", idx);
        uaav::write_trajectory_csv(
            rec, (std::filesystem::path(out_dir) / name).string());
        const double skip_t = skip >= 0.0 ? skip : 0.25 * cfg.duration;
        p.metrics = uaav::compute_metrics(rec, skip_t);
        p.ok = true;
        p.status = "ok";
      } catch (const std::exception& e) {
        p.ok = false;
        p.status = e.what();
        for (char& c : p.status)
          if (c == ',' || c == '\n') c = ';';
      }
    }
  };

  if (jobs < 1) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  std::vector<std::thread> pool;
  for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  const std::string summary_path =
      (std::filesystem::path(out_dir) / "summary.csv").string();
  std::ofstream f(summary_path, std::ios::binary);
  if (!f) {
    std::fprintf(stderr, "error: cannot open %s\n", summary_path.c_str());
    return kExitIo;
  }
  f << "point";
  for (const auto& a : axes) f << ',' << a.key;
  f << ",mean_surge,pitch_p2p,yaw_peak_hz,status\n";
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const SweepPoint& p = points[idx];
    f << idx;
    for (const auto& a : p.assignments)
      f << ',' << a.substr(a.find('=') + 1);
    f << ',' << uaav::format_g9(p.metrics.mean_surge) << ','
      << uaav::format_g9(p.metrics.pitch_p2p) << ','
      << uaav::format_g9(p.metrics.yaw_peak_hz) << ',' << p.status << '\n';
  }
  f.close();

  std::size_t failed = 0;
  for (const auto& p : points)
    if (!p.ok) ++failed;
  std::printf("sweep: %zu points, %zu failed, summary at %s\n", points.size(),
              failed, summary_path.c_str());
  return kExitOk;
}

int cmd_presets() {
  std::printf("flapping behavior presets (offsets X_i, phase biases):\n");
  std::printf("  %-10s X = (0, 0, 0)        tail in phase or opposed\n",
              "forward");
  std::printf("  %-10s X = (+m, -m, 0)      differential wing offsets\n",
              "roll");
  std::printf("  %-10s X = (+m, +m, -m)     wings against tail\n", "pitch");
  std::printf("  %-10s X = (pi/2, 0, 0)     wing 1 held vertical\n",
              "yaw_pos");
  std::printf("  %-10s X = (0, pi/2, 0)     wing 2 held vertical\n",
              "yaw_neg");
  std::printf("power: frequency f (default %.4f Hz) and amplitude R "
              "(default 0.5 rad);\n",
              15.0 / (2.0 * M_PI));
  std::printf("offset magnitude m defaults to 0.3 rad.\n");
  return kExitOk;
}

int cmd_validate(const std::string& config_path,
                 const std::vector<std::string>& overrides) {
  uaav::ScenarioConfig cfg;
  try {
    if (!config_path.empty())
      cfg = uaav::load_scenario(config_path, overrides);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return classify(e);
  }
  const uaav::ValidationReport report = uaav::run_validation(cfg);
  for (const auto& c : report.checks) {
    std::printf("[%s] %-32s %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                c.detail.c_str());
  }
  return report.all_passed() ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scenario-driven multi-modal vehicle simulator"};
  app.require_subcommand(1);

  std::string config_path, output_path = "trajectory.csv";
  std::string grid_spec, out_dir = "sweep_out", cpg_trace_path;
  std::vector<std::string> overrides;
  int jobs = 0;
  double skip = -1.0;

  auto* run = app.add_subcommand("run", "run one scenario and write CSV");
  run->add_option("config", config_path, "scenario config file")->required();
  run->add_option("-o,--output", output_path, "output CSV path");
  run->add_option("--cpg-trace", cpg_trace_path,
                  "also write the oscillator trace CSV here");
  run->add_option("--set", overrides, "override config key=value");

  auto* sweep = app.add_subcommand("sweep", "run a parameter grid");
  sweep->add_option("config", config_path, "scenario config file")->required();
  sweep->add_option("--grid", grid_spec, "grid spec key=v1,v2;key2=w1,w2")
      ->required();
  sweep->add_option("-o,--output", out_dir, "output directory");
  sweep->add_option("--set", overrides, "override config key=value");
  sweep->add_option("--jobs", jobs, "concurrent runs (default: hw threads)");
  sweep->add_option("--skip", skip, "metrics skip time (s)");

  auto* presets = app.add_subcommand("presets", "print behavior presets");

  auto* validate = app.add_subcommand("validate", "run the invariant suite");
  validate->add_option("config", config_path, "optional scenario config");
  validate->add_option("--set", overrides, "override config key=value");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed())
    return cmd_run(config_path, output_path, cpg_trace_path, overrides);
  if (sweep->parsed())
    return cmd_sweep(config_path, grid_spec, out_dir, overrides, jobs, skip);
  if (presets->parsed()) return cmd_presets();
  if (validate->parsed()) return cmd_validate(config_path, overrides);
  return kExitError;
}
