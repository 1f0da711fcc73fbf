#include "ks/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "ks/error.hpp"

namespace ks {

using nlohmann::json;

bool Report::ok() const {
  for (const auto& e : events)
    if (e.fatal) return false;
  for (const auto& c : checks)
    if (c.asserted && !c.pass) return false;
  return true;
}

const diagnostics::TimeSeries* Report::find_series(const std::string& label) const {
  for (const auto& s : series)
    if (s.label == label) return &s;
  return nullptr;
}

const CheckVerdict* Report::find_check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return nullptr;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += (c == '\n' || c == '\r') ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

json to_json(const Report& r) {
  json j;
  j["scenario"] = to_json(r.scenario);
  const auto& g = r.regime;
  j["regime"] = {{"global_bounded", g.global_bounded},
                 {"global_exists", g.global_exists},
                 {"thm16_applies", g.thm16_applies},
                 {"stability", g.stability},
                 {"spreading", g.spreading},
                 {"max_safe_r", finite_or_null(g.max_safe_r)},
                 {"thresholds",
                  {{"global_chi_max", g.thresholds.global_chi_max},
                   {"half_dim", g.thresholds.half_dim},
                   {"stability_chi_max", g.thresholds.stability_chi_max},
                   {"spreading_chi_max", g.thresholds.spreading_chi_max}}}};
  json series = json::object();
  for (const auto& s : r.series) {
    json values = json::array();
    for (double v : s.values) values.push_back(finite_or_null(v));
    series[s.label] = {{"times", s.times}, {"values", values}};
  }
  j["series"] = series;
  json events = json::array();
  for (const auto& e : r.events)
    events.push_back({{"kind", e.kind}, {"t", e.t}, {"message", e.message}, {"fatal", e.fatal}});
  j["events"] = events;
  if (r.speed)
    j["speed"] = {{"speed", r.speed->speed}, {"stderr", r.speed->std_error}, {"samples", r.speed->samples}};
  else
    j["speed"] = nullptr;
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"asserted", c.asserted},
                      {"pass", c.pass},
                      {"measured", finite_or_null(c.measured)},
                      {"bound", finite_or_null(c.bound)},
                      {"detail", c.detail}});
  j["checks"] = checks;
  json valid = json::array();
  for (bool v : r.front.valid) valid.push_back(v);
  j["front"] = {{"level", r.front.level}, {"times", r.front.times}, {"radii", r.front.radii}, {"valid", valid}};
  // Snapshot fields live in plot/snapshots/; the summary lists their times.
  json snaps = json::array();
  for (const auto& snap : r.snapshots) snaps.push_back(snap.t);
  j["snapshots"] = snaps;
  j["t_final"] = r.t_final;
  j["steps"] = r.steps;
  j["completed"] = r.completed;
  j["wall_seconds"] = r.wall_seconds;
  j["ok"] = r.ok();
  return j;
}

namespace harness {

fs::path default_output_root() {
  if (const char* env = std::getenv("KS_OUTPUT_ROOT"); env && *env) return env;
  return "runs";
}

fs::path bundled_scenario_dir() {
  if (const char* env = std::getenv("KS_SCENARIO_DIR"); env && *env) return env;
  return KS_SCENARIO_DIR;
}

std::vector<fs::path> bundled_scenarios() {
  std::vector<fs::path> out;
  const fs::path dir = bundled_scenario_dir();
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

fs::path output_dir_for(const Scenario& s, const std::string& override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (!s.output_dir.empty()) return s.output_dir;
  return default_output_root() / s.name;
}

void prepare_output_dir(const fs::path& dir, bool force) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw OutputExists(dir.string() + " exists and is not a directory");
    if (!fs::is_empty(dir)) {
      if (!force) throw OutputExists(dir.string() + " is not empty; pass --force to overwrite");
      fs::remove_all(dir);
    }
  }
  fs::create_directories(dir);
}

void write_timeseries_csv(const Report& r, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  for (std::size_t c = 0; c < kCsvColumns.size(); ++c) out << (c ? "," : "") << kCsvColumns[c];
  out << "\n";
  std::vector<const diagnostics::TimeSeries*> cols;
  for (std::size_t c = 1; c < kCsvColumns.size(); ++c) cols.push_back(r.find_series(kCsvColumns[c]));
  const std::size_t rows = cols.front() ? cols.front()->size() : 0;
  for (std::size_t i = 0; i < rows; ++i) {
    out << format_number(cols.front()->times[i]);
    for (const auto* s : cols) out << "," << format_number(s->values[i]);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

void write_summary_json(const Report& r, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << to_json(r).dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

void emit_plot_data(const Report& r, const fs::path& dir, bool force) {
  prepare_output_dir(dir, force);
  json manifest;
  manifest["scenario"] = r.scenario.name;
  json files = json::array();
  for (const auto& s : r.series) {
    const std::string name = s.label + ".dat";
    std::ofstream out(dir / name);
    out << "# t " << s.label << "\n";
    for (std::size_t i = 0; i < s.size(); ++i)
      out << format_number(s.times[i]) << " " << format_number(s.values[i]) << "\n";
    if (!out) throw std::runtime_error("write failed: " + (dir / name).string());
    files.push_back({{"label", s.label}, {"file", name}});
  }
  manifest["series"] = files;

  if (r.snapshots.empty()) {
    manifest["snapshots"] = nullptr;
    manifest["snapshots_note"] = "snapshots disabled in scenario diagnostics";
  } else {
    fs::create_directories(dir / "snapshots");
    json snaps = json::array();
    for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
      const auto& snap = r.snapshots[k];
      char name[64];
      std::snprintf(name, sizeof name, "snapshots/snap_%05zu.dat", k);
      std::ofstream out(dir / name);
      const Grid& g = snap.u.grid;
      const int n = g.n();
      out << "# t = " << format_number(snap.t) << "\n";
      out << (g.dim() == 1 ? "# x u v\n" : "# x y u v\n");
      for (std::size_t i = 0; i < snap.u.size(); ++i) {
        if (g.dim() == 1) {
          out << format_number(g.coordinate(static_cast<int>(i))) << " ";
        } else {
          out << format_number(g.coordinate(static_cast<int>(i / n))) << " "
              << format_number(g.coordinate(static_cast<int>(i % n))) << " ";
        }
        out << format_number(snap.u[i]) << " " << format_number(snap.v[i]) << "\n";
      }
      if (!out) throw std::runtime_error(std::string("write failed: ") + name);
      snaps.push_back({{"t", snap.t}, {"file", name}});
    }
    manifest["snapshots"] = snaps;
  }
  std::ofstream out(dir / "manifest.json");
  out << manifest.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: manifest.json");
}

Report run_experiment(const Scenario& s, const fs::path& dir, bool force) {
  prepare_output_dir(dir, force);
  Report r = run(s);
  write_timeseries_csv(r, dir / "timeseries.csv");
  write_summary_json(r, dir / "summary.json");
  emit_plot_data(r, dir / "plot", false);
  return r;
}

std::vector<double> parse_value_list(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw InvalidArgument("empty entry in value list '" + list + "'");
    item = item.substr(b, e - b + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw InvalidArgument("not a number in value list: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

void write_sweep_csv(const std::string& axis, const std::vector<SweepRow>& rows, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << axis
      << ",ok,spreading,stability,global_bounded,speed,speed_stderr,t_final,final_mass,final_linf,failed_checks,error\n";
  for (const auto& r : rows) {
    out << format_number(r.value) << "," << r.ok << "," << r.spreading << "," << r.stability << ","
        << r.global_bounded << "," << format_number(r.speed) << "," << format_number(r.speed_stderr) << ","
        << format_number(r.t_final) << "," << format_number(r.final_mass) << "," << format_number(r.final_linf)
        << "," << csv_quote(r.failed_checks) << "," << csv_quote(r.error) << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

SweepResult sweep(const Scenario& base, const std::string& axis, const std::vector<double>& values,
                  const fs::path& root, int workers, bool force) {
  if (values.empty()) throw InvalidArgument("sweep: empty value list");
  {
    Scenario probe = base;
    set_numeric_field(probe, axis, values.front());  // rejects non-numeric axes up front
  }
  prepare_output_dir(root, force);

  SweepResult result;
  result.reports.resize(values.size());
  result.rows.resize(values.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      SweepRow& row = result.rows[i];
      row.value = values[i];
      try {
        Scenario s = base;
        set_numeric_field(s, axis, values[i]);
        s.name = base.name + "_" + axis + "=" + format_number(values[i]);
        const fs::path dir = root / (axis + "=" + format_number(values[i]));
        Report r = run_experiment(s, dir, false);
        row.ok = r.ok();
        row.spreading = r.regime.spreading;
        row.stability = r.regime.stability;
        row.global_bounded = r.regime.global_bounded;
        row.speed = r.speed ? r.speed->speed : std::nan("");
        row.speed_stderr = r.speed ? r.speed->std_error : std::nan("");
        row.t_final = r.t_final;
        row.final_mass = r.find_series("mass")->values.back();
        row.final_linf = r.find_series("linf")->values.back();
        for (const auto& c : r.checks)
          if (c.asserted && !c.pass) row.failed_checks += (row.failed_checks.empty() ? "" : ";") + c.name;
        for (const auto& e : r.events)
          if (e.fatal) row.error += (row.error.empty() ? "" : ";") + e.kind;
        result.reports[i] = std::move(r);
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
  };

  const int k = std::max(1, std::min<int>(workers, static_cast<int>(values.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < k; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  write_sweep_csv(axis, result.rows, root / "aggregate.csv");
  return result;
}

}  // namespace harness
}  // namespace ks
