#pragma once

// User-facing orchestration: run a scenario and write its artifacts, sweep a
// parameter, and emit plot-ready files.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "ks/report.hpp"
#include "ks/scenario.hpp"

namespace ks::harness {

namespace fs = std::filesystem;

/// Raised when an output directory already holds files and force is off.
class OutputExists : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// $KS_OUTPUT_ROOT, or "runs" when unset.
fs::path default_output_root();

/// Directory of the scenarios shipped with the project.
fs::path bundled_scenario_dir();
std::vector<fs::path> bundled_scenarios();

/// Output directory for a scenario: explicit override, else the scenario's
/// own output.dir, else <output root>/<name>.
fs::path output_dir_for(const Scenario& s, const std::string& override_dir = "");

/// Creates `dir`, refusing (OutputExists) when it is non-empty unless force.
void prepare_output_dir(const fs::path& dir, bool force);

/// Runs the scenario and writes timeseries.csv, summary.json and plot/ under
/// `dir`. Solver events end up in the report, never as exceptions.
Report run_experiment(const Scenario& s, const fs::path& dir, bool force = false);

void write_timeseries_csv(const Report& r, const fs::path& file);
void write_summary_json(const Report& r, const fs::path& file);

/// plot/<label>.dat two-column files, optional snapshots/, and manifest.json.
/// Refuses to write into a non-empty plot directory unless force.
void emit_plot_data(const Report& r, const fs::path& dir, bool force = false);

struct SweepRow {
  double value = 0.0;
  bool ok = false;
  std::string error;
  bool spreading = false;
  bool stability = false;
  bool global_bounded = false;
  double speed = 0.0;
  double speed_stderr = 0.0;
  double t_final = 0.0;
  double final_mass = 0.0;
  double final_linf = 0.0;
  std::string failed_checks;
};

struct SweepResult {
  std::vector<Report> reports;  ///< one per value, empty scenario name when the run failed to start
  std::vector<SweepRow> rows;
};

/// One independent run per value of `axis`, at most `workers` at a time, each
/// in <root>/<axis>=<value>; aggregate.csv is written to root afterwards.
SweepResult sweep(const Scenario& base, const std::string& axis, const std::vector<double>& values,
                  const fs::path& root, int workers = 1, bool force = false);

void write_sweep_csv(const std::string& axis, const std::vector<SweepRow>& rows, const fs::path& file);

/// "0,0.1,0.2" -> {0, 0.1, 0.2}. Throws InvalidArgument on malformed input.
std::vector<double> parse_value_list(const std::string& list);

}  // namespace ks::harness
