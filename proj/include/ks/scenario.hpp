#pragma once

// Experiment description and its on-disk form: a JSON document with a strict
// schema (unknown keys are errors) and a "schema_version" field.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ks/diagnostics.hpp"
#include "ks/icfactory.hpp"
#include "ks/params.hpp"
#include "ks/stepper.hpp"

namespace ks {

inline constexpr int kSchemaVersion = 1;

struct GridSpec {
  int dim = 1;
  int n = 256;
  double half_width = 20.0;
};

struct DiagnosticsConfig {
  double sample_every = 0.1;
  std::optional<double> front_level;  ///< default a / (2b)
  double guard = 0.1;
  double far_value = 0.0;
  /// Extra L^p norms to record; 1, 2 and infinity are always recorded.
  std::vector<double> norms;
  bool snapshots = false;
  std::optional<diagnostics::Window> speed_window;  ///< default: last half of the valid trace
};

struct LrGrowthCheck {
  double r = 1.0;
  double tol = 1e-6;
};

struct NonincreasingCheck {
  double tol = 1e-8;
};

struct EnvelopeCheck {
  double tol = 1e-6;
  std::optional<double> final_max;
};

struct EquilibriumCheck {
  double by_time = 40.0;
  double tol = 1e-3;
  std::optional<double> trend_from;
};

struct SpeedCheck {
  double min = 0.0;
  double max = diagnostics::kInf;
};

struct SpreadingCheck {
  double inner_fraction = 0.5;
  double outer_fraction = 1.5;
  double inner_tol = 1e-2;
  double outer_tol = 1e-4;
};

struct LpTrendCheck {
  double p = 2.0;
};

struct ChecksConfig {
  bool sandwich = true;
  bool boundary_guard = true;
  std::optional<LrGrowthCheck> lr_growth;
  std::optional<NonincreasingCheck> mass_nonincreasing;
  std::optional<EnvelopeCheck> envelope;
  std::optional<EquilibriumCheck> equilibrium;
  std::optional<SpeedCheck> speed;
  std::optional<SpreadingCheck> spreading;
  std::optional<LpTrendCheck> lp_trend;
};

struct Scenario {
  int schema_version = kSchemaVersion;
  std::string name;
  GridSpec grid;
  Params params;
  ic::ICSpec initial;
  StepControl stepping;
  DiagnosticsConfig diagnostics;
  ChecksConfig checks;
  std::string output_dir;  ///< empty: <output root>/<name>
};

/// Scenario file problems. `field()` names the offending key path (empty for
/// syntax errors); `line()` is 1-based, 0 when unknown.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& what, std::string field, int line = 0)
      : std::runtime_error(what), field_(std::move(field)), line_(line) {}
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  std::string field_;
  int line_;
};

Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");
Scenario load_scenario(const std::string& path);
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Scenario& s);

/// Throws ScenarioError naming the first invalid field.
void validate(const Scenario& s);

/// Sets a numeric field addressed by a dotted path ("params.chi") or one of
/// the short names chi, a, b, dt, t_end, n, L. Throws ScenarioError when the
/// axis does not name a numeric field.
void set_numeric_field(Scenario& s, const std::string& axis, double value);

}  // namespace ks
