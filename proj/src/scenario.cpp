#include "ks/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ks/error.hpp"

namespace ks {

using nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were read so leftovers can
// be reported as schema violations.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ScenarioError(where() + ": expected an object", path_);
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "infinity"))
      return std::numeric_limits<double>::infinity();
    if (!v.is_number()) throw ScenarioError(field(key) + ": expected a number", field(key));
    return v.get<double>();
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key, 0.0);
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ScenarioError(field(key) + ": expected an integer", field(key));
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ScenarioError(field(key) + ": expected true or false", field(key));
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) throw ScenarioError(field(key) + ": expected a string", field(key));
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    std::vector<double> out;
    if (!has(key)) return out;
    const json& v = raw(key);
    if (!v.is_array()) throw ScenarioError(field(key) + ": expected an array", field(key));
    for (const auto& e : v) {
      if (e.is_string() && e.get<std::string>() == "inf")
        out.push_back(std::numeric_limits<double>::infinity());
      else if (e.is_number())
        out.push_back(e.get<double>());
      else
        throw ScenarioError(field(key) + ": expected numbers", field(key));
    }
    return out;
  }

  /// Sub-object reader, or nullopt when the key is absent. `false` is
  /// accepted as "absent" so checks can be switched off explicitly.
  std::optional<ObjectReader> child(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const json& v = raw(key);
    if (v.is_boolean() && !v.get<bool>()) return std::nullopt;
    if (v.is_boolean()) return ObjectReader(empty_object(), field(key));
    return ObjectReader(v, field(key));
  }

  void finish() const {
    for (const auto& [key, _] : j_.items())
      if (!seen_.count(key)) throw ScenarioError(where() + ": unknown key '" + key + "'", field(key));
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  static const json& empty_object() {
    static const json e = json::object();
    return e;
  }
  std::string where() const { return path_.empty() ? "scenario" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

int line_of_offset(const std::string& text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

int line_of_key(const std::string& text, const std::string& field) {
  const auto dot = field.rfind('.');
  const std::string key = "\"" + (dot == std::string::npos ? field : field.substr(dot + 1)) + "\"";
  const auto pos = text.find(key);
  return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

json number_or_inf(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  Scenario s;
  ObjectReader top(j, "");
  if (!top.has("schema_version")) throw ScenarioError("schema_version: required", "schema_version");
  s.schema_version = top.integer("schema_version", kSchemaVersion);
  if (s.schema_version != kSchemaVersion)
    throw ScenarioError("schema_version: unsupported version " + std::to_string(s.schema_version), "schema_version");
  if (!top.has("name")) throw ScenarioError("name: required", "name");
  s.name = top.string("name", "");

  if (auto g = top.child("grid")) {
    s.grid.dim = g->integer("dim", s.grid.dim);
    s.grid.n = g->integer("n", s.grid.n);
    s.grid.half_width = g->number("L", s.grid.half_width);
    g->finish();
  }
  if (auto p = top.child("params")) {
    s.params.chi = p->number("chi", s.params.chi);
    s.params.a = p->number("a", s.params.a);
    s.params.b = p->number("b", s.params.b);
    p->finish();
  }
  s.params.dim = s.grid.dim;

  if (auto ic = top.child("initial")) {
    const std::string kind = ic->string("kind", ic::to_string(s.initial.kind));
    try {
      s.initial.kind = ic::kind_from_string(kind);
    } catch (const InvalidArgument&) {
      throw ScenarioError("initial.kind: unknown kind '" + kind + "'", "initial.kind");
    }
    s.initial.amplitude = ic->number("amplitude", s.initial.amplitude);
    s.initial.center = ic->numbers("center");
    s.initial.radius = ic->number("radius", s.initial.radius);
    s.initial.width = ic->number("width", s.initial.width);
    // Strictly positive random data needs a floor; default 0.1 a/b.
    const double floor_default =
        s.initial.kind == ic::Kind::positive_random ? 0.1 * s.params.a / s.params.b : s.initial.floor;
    s.initial.floor = ic->number("floor", floor_default);
    s.initial.seed = static_cast<std::uint64_t>(ic->integer("seed", 0));
    ic->finish();
  }
  if (auto st = top.child("stepping")) {
    s.stepping.dt = st->number("dt", s.stepping.dt);
    s.stepping.t_end = st->number("t_end", s.stepping.t_end);
    s.stepping.dealias = st->boolean("dealias", s.stepping.dealias);
    s.stepping.negativity_budget = st->number("negativity_budget", s.stepping.negativity_budget);
    s.stepping.blowup_threshold = st->number("blowup_threshold", s.stepping.blowup_threshold);
    st->finish();
  }
  if (auto d = top.child("diagnostics")) {
    auto& c = s.diagnostics;
    c.sample_every = d->number("sample_every", c.sample_every);
    c.front_level = d->optional_number("front_level");
    c.guard = d->number("guard", c.guard);
    c.far_value = d->number("far_value", c.far_value);
    c.norms = d->numbers("norms");
    c.snapshots = d->boolean("snapshots", c.snapshots);
    if (d->has("speed_window")) {
      const auto w = d->numbers("speed_window");
      if (w.size() != 2) throw ScenarioError("diagnostics.speed_window: expected [begin, end]", "diagnostics.speed_window");
      c.speed_window = diagnostics::Window{w[0], w[1]};
    }
    d->finish();
  }
  if (auto c = top.child("checks")) {
    auto& k = s.checks;
    k.sandwich = c->boolean("sandwich", k.sandwich);
    k.boundary_guard = c->boolean("boundary_guard", k.boundary_guard);
    if (auto x = c->child("lr_growth")) {
      LrGrowthCheck v;
      v.r = x->number("r", v.r);
      v.tol = x->number("tol", v.tol);
      x->finish();
      k.lr_growth = v;
    }
    if (auto x = c->child("mass_nonincreasing")) {
      NonincreasingCheck v;
      v.tol = x->number("tol", v.tol);
      x->finish();
      k.mass_nonincreasing = v;
    }
    if (auto x = c->child("envelope")) {
      EnvelopeCheck v;
      v.tol = x->number("tol", v.tol);
      v.final_max = x->optional_number("final_max");
      x->finish();
      k.envelope = v;
    }
    if (auto x = c->child("equilibrium")) {
      EquilibriumCheck v;
      v.by_time = x->number("by_time", v.by_time);
      v.tol = x->number("tol", v.tol);
      v.trend_from = x->optional_number("trend_from");
      x->finish();
      k.equilibrium = v;
    }
    if (auto x = c->child("speed")) {
      SpeedCheck v;
      v.min = x->number("min", v.min);
      v.max = x->number("max", v.max);
      x->finish();
      k.speed = v;
    }
    if (auto x = c->child("spreading")) {
      SpreadingCheck v;
      v.inner_fraction = x->number("inner_fraction", v.inner_fraction);
      v.outer_fraction = x->number("outer_fraction", v.outer_fraction);
      v.inner_tol = x->number("inner_tol", v.inner_tol);
      v.outer_tol = x->number("outer_tol", v.outer_tol);
      x->finish();
      k.spreading = v;
    }
    if (auto x = c->child("lp_trend")) {
      LpTrendCheck v;
      v.p = x->number("p", v.p);
      x->finish();
      k.lp_trend = v;
    }
    c->finish();
  }
  if (auto o = top.child("output")) {
    s.output_dir = o->string("dir", "");
    o->finish();
  }
  top.finish();
  validate(s);
  return s;
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const int line = line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ScenarioError(origin + ":" + std::to_string(line) + ": parse error: " + e.what(), "", line);
  }
  try {
    return scenario_from_json(j);
  } catch (const ScenarioError& e) {
    const int line = e.field().empty() ? 0 : line_of_key(text, e.field());
    std::string where = origin;
    if (line > 0) where += ":" + std::to_string(line);
    throw ScenarioError(where + ": " + e.what(), e.field(), line);
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'", "");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

void validate(const Scenario& s) {
  auto fail = [](const std::string& field, const std::string& why) { throw ScenarioError(field + ": " + why, field); };
  if (s.name.empty()) fail("name", "must not be empty");
  if (s.grid.dim != 1 && s.grid.dim != 2) fail("grid.dim", "must be 1 or 2");
  if (s.grid.n < 8 || (s.grid.n & (s.grid.n - 1)) != 0) fail("grid.n", "must be a power of two >= 8");
  if (!(s.grid.half_width > 0.0)) fail("grid.L", "must be > 0");
  if (!(s.params.chi >= 0.0)) fail("params.chi", "must be >= 0");
  if (!(s.params.a >= 0.0)) fail("params.a", "must be >= 0");
  if (!(s.params.b > 0.0)) fail("params.b", "must be > 0");
  try {
    ic::validate(s.initial);
  } catch (const InvalidArgument& e) {
    fail("initial", e.what());
  }
  if (!s.initial.center.empty() && static_cast<int>(s.initial.center.size()) != s.grid.dim)
    fail("initial.center", "must have one entry per dimension");
  if (!(s.stepping.dt > 0.0) || !std::isfinite(s.stepping.dt)) fail("stepping.dt", "must be > 0");
  if (!(s.stepping.t_end >= 0.0) || !std::isfinite(s.stepping.t_end)) fail("stepping.t_end", "must be >= 0");
  if (s.stepping.negativity_budget < 0.0) fail("stepping.negativity_budget", "must be >= 0 (0 selects the default)");
  if (s.stepping.blowup_threshold < 0.0) fail("stepping.blowup_threshold", "must be >= 0 (0 selects the default)");
  const auto& d = s.diagnostics;
  if (!(d.sample_every >= s.stepping.dt)) fail("diagnostics.sample_every", "must be >= dt");
  if (d.front_level && !(*d.front_level > 0.0)) fail("diagnostics.front_level", "must be > 0");
  if (!(d.guard > 0.0 && d.guard < 0.5)) fail("diagnostics.guard", "must lie in (0, 0.5)");
  for (double p : d.norms)
    if (!(p >= 1.0)) fail("diagnostics.norms", "every p must be >= 1");
  if (d.speed_window && !(d.speed_window->end > d.speed_window->begin))
    fail("diagnostics.speed_window", "end must exceed begin");
  const auto& c = s.checks;
  if (c.lr_growth && !(c.lr_growth->r >= 1.0)) fail("checks.lr_growth.r", "must be >= 1");
  if (c.lp_trend && !(c.lp_trend->p >= 1.0)) fail("checks.lp_trend.p", "must be >= 1");
  if (c.speed && !(c.speed->max >= c.speed->min)) fail("checks.speed", "max must be >= min");
  if (c.spreading && !(c.spreading->outer_fraction > c.spreading->inner_fraction))
    fail("checks.spreading", "outer_fraction must exceed inner_fraction");
}

json to_json(const Scenario& s) {
  json j;
  j["schema_version"] = s.schema_version;
  j["name"] = s.name;
  j["grid"] = {{"dim", s.grid.dim}, {"n", s.grid.n}, {"L", s.grid.half_width}};
  j["params"] = {{"chi", s.params.chi}, {"a", s.params.a}, {"b", s.params.b}};
  j["initial"] = {{"kind", ic::to_string(s.initial.kind)},
                  {"amplitude", s.initial.amplitude},
                  {"center", s.initial.center},
                  {"radius", s.initial.radius},
                  {"width", s.initial.width},
                  {"floor", s.initial.floor},
                  {"seed", s.initial.seed}};
  j["stepping"] = {{"dt", s.stepping.dt},
                   {"t_end", s.stepping.t_end},
                   {"dealias", s.stepping.dealias},
                   {"negativity_budget", s.stepping.negativity_budget},
                   {"blowup_threshold", s.stepping.blowup_threshold}};
  json d = {{"sample_every", s.diagnostics.sample_every},
            {"guard", s.diagnostics.guard},
            {"far_value", s.diagnostics.far_value},
            {"snapshots", s.diagnostics.snapshots}};
  json norms = json::array();
  for (double p : s.diagnostics.norms) norms.push_back(number_or_inf(p));
  d["norms"] = norms;
  if (s.diagnostics.front_level) d["front_level"] = *s.diagnostics.front_level;
  if (s.diagnostics.speed_window)
    d["speed_window"] = {number_or_inf(s.diagnostics.speed_window->begin), number_or_inf(s.diagnostics.speed_window->end)};
  j["diagnostics"] = d;

  const auto& c = s.checks;
  json k = {{"sandwich", c.sandwich}, {"boundary_guard", c.boundary_guard}};
  if (c.lr_growth) k["lr_growth"] = {{"r", number_or_inf(c.lr_growth->r)}, {"tol", c.lr_growth->tol}};
  if (c.mass_nonincreasing) k["mass_nonincreasing"] = {{"tol", c.mass_nonincreasing->tol}};
  if (c.envelope) {
    k["envelope"] = {{"tol", c.envelope->tol}};
    if (c.envelope->final_max) k["envelope"]["final_max"] = *c.envelope->final_max;
  }
  if (c.equilibrium) {
    k["equilibrium"] = {{"by_time", c.equilibrium->by_time}, {"tol", c.equilibrium->tol}};
    if (c.equilibrium->trend_from) k["equilibrium"]["trend_from"] = *c.equilibrium->trend_from;
  }
  if (c.speed) k["speed"] = {{"min", c.speed->min}, {"max", number_or_inf(c.speed->max)}};
  if (c.spreading)
    k["spreading"] = {{"inner_fraction", c.spreading->inner_fraction},
                      {"outer_fraction", c.spreading->outer_fraction},
                      {"inner_tol", c.spreading->inner_tol},
                      {"outer_tol", c.spreading->outer_tol}};
  if (c.lp_trend) k["lp_trend"] = {{"p", number_or_inf(c.lp_trend->p)}};
  j["checks"] = k;
  j["output"] = {{"dir", s.output_dir}};
  return j;
}

void set_numeric_field(Scenario& s, const std::string& axis, double value) {
  static const std::pair<const char*, const char*> aliases[] = {
      {"chi", "params.chi"}, {"a", "params.a"},     {"b", "params.b"}, {"dt", "stepping.dt"},
      {"t_end", "stepping.t_end"}, {"n", "grid.n"}, {"L", "grid.L"}};
  std::string path = axis;
  for (const auto& [alias, full] : aliases)
    if (axis == alias) path = full;

  json j = to_json(s);
  std::string pointer = "/" + path;
  for (auto& ch : pointer)
    if (ch == '.') ch = '/';
  const json::json_pointer ptr(pointer);
  if (!j.contains(ptr)) throw ScenarioError("sweep axis '" + axis + "' does not name a scenario field", axis);
  json& target = j[ptr];
  if (target.is_number_integer()) {
    if (value != std::floor(value)) throw ScenarioError("sweep axis '" + axis + "' takes integer values", axis);
    target = static_cast<std::int64_t>(value);
  } else if (target.is_number()) {
    target = value;
  } else {
    throw ScenarioError("sweep axis '" + axis + "' is not numeric", axis);
  }
  s = scenario_from_json(j);
}

}  // namespace ks
