#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ks/diagnostics.hpp"
#include "ks/reference.hpp"
#include "ks/scenario.hpp"

namespace ks {

struct Event {
  std::string kind;  ///< blowup, negativity, non_finite, dt_collapse, guard_breach, stability_warning, ...
  double t = 0.0;
  std::string message;
  bool fatal = false;
};

struct CheckVerdict {
  std::string name;
  /// True when the theorem behind the check applies to this scenario; only
  /// asserted checks affect the exit status.
  bool asserted = false;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

struct SampleSnapshot {
  double t = 0.0;
  Field u;
  Field v;
};

struct Report {
  Scenario scenario;
  reference::RegimeReport regime;
  std::vector<diagnostics::TimeSeries> series;
  std::vector<Event> events;
  std::optional<diagnostics::SpeedEstimate> speed;
  diagnostics::FrontTrace front;
  std::vector<CheckVerdict> checks;
  std::vector<SampleSnapshot> snapshots;
  double t_final = 0.0;
  std::int64_t steps = 0;
  bool completed = false;
  double wall_seconds = 0.0;

  /// All asserted checks pass and no fatal event occurred.
  bool ok() const;
  const diagnostics::TimeSeries* find_series(const std::string& label) const;
  const CheckVerdict* find_check(const std::string& name) const;
};

/// Fixed CSV column order of the time-series file.
inline const std::vector<std::string> kCsvColumns = {
    "t", "mass", "l2", "linf", "front_radius", "front_valid", "dist_u_ab", "dist_v_ab", "min_u", "cstar_min"};

nlohmann::json to_json(const Report& r);

}  // namespace ks
