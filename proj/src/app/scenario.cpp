#include "nwa/app/scenario.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <sstream>

#include "nwa/app/profile.hpp"

namespace nwa::app {
namespace fs = std::filesystem;

ScenarioError::ScenarioError(std::vector<std::string> errors)
    : ValidationError([&] {
        std::string msg = fmt::format("scenario has {} error(s)", errors.size());
        for (const auto& e : errors) msg += "\n  " + e;
        return msg;
      }()),
      errors_(std::move(errors)) {}

TimeGrid GridSpec::build() const {
  if (weights.empty()) {
    if (years < 1) throw ValidationError("grid.years must be >= 1");
    return TimeGrid::uniform(years, intervals_per_year, step_hours);
  }
  return {years, intervals_per_year, step_hours, weights};
}

namespace {

// Parsing context: collects errors and remembers where each field sits so
// later semantic messages can point at a line.
struct Reader {
  std::string label;
  fs::path base_dir;
  std::vector<std::string> errors;
  std::map<std::string, int> lines;

  static int line_of(const YAML::Node& n) { return n.Mark().line + 1; }

  void error(const YAML::Node& at, const std::string& field, const std::string& msg) {
    errors.push_back(fmt::format("{}:{}: {}: {}", label, line_of(at), field, msg));
  }

  void note(const std::string& field, const YAML::Node& n) {
    if (n.Mark().line >= 0) lines[field] = line_of(n);
  }

  bool map(const YAML::Node& n, const std::string& field) {
    if (n.IsMap()) return true;
    error(n, field, "expected a mapping");
    return false;
  }

  void allow(const YAML::Node& n, const std::string& field,
             std::initializer_list<std::string_view> keys) {
    for (const auto& kv : n) {
      const auto key = kv.first.as<std::string>();
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        error(kv.first, field.empty() ? key : field + "." + key, "unknown key");
      }
    }
  }

  // Present child or nullopt; records an error when required and missing.
  std::optional<YAML::Node> child(const YAML::Node& parent, const char* key,
                                  const std::string& field, bool required) {
    YAML::Node n = parent[key];
    if (!n.IsDefined() || n.IsNull()) {
      if (required) error(parent, field, "required field missing");
      return std::nullopt;
    }
    note(field, n);
    return n;
  }

  std::optional<double> number(const YAML::Node& n, const std::string& field) {
    if (!n.IsScalar()) {
      error(n, field, "expected a number");
      return std::nullopt;
    }
    try {
      const double v = n.as<double>();
      if (!std::isfinite(v)) {
        error(n, field, "must be finite");
        return std::nullopt;
      }
      return v;
    } catch (const YAML::Exception&) {
      error(n, field, fmt::format("'{}' is not a number", n.Scalar()));
      return std::nullopt;
    }
  }

  void read(const YAML::Node& parent, const char* key, const std::string& field, double& out,
            bool required = false) {
    if (auto n = child(parent, key, field, required)) {
      if (auto v = number(*n, field)) out = *v;
    }
  }

  void read(const YAML::Node& parent, const char* key, const std::string& field, int& out,
            bool required = false) {
    auto n = child(parent, key, field, required);
    if (!n) return;
    try {
      if (!n->IsScalar()) throw YAML::Exception(n->Mark(), "");
      out = n->as<int>();
    } catch (const YAML::Exception&) {
      error(*n, field, "expected an integer");
    }
  }

  void read(const YAML::Node& parent, const char* key, const std::string& field,
            std::string& out, bool required = false) {
    auto n = child(parent, key, field, required);
    if (!n) return;
    if (n->IsScalar()) {
      out = n->Scalar();
    } else {
      error(*n, field, "expected text");
    }
  }

  // Scalar (broadcast to `broadcast` entries), list, or {csv: file, column: name}.
  std::optional<std::vector<double>> series(const YAML::Node& n, const std::string& field,
                                            std::size_t broadcast,
                                            std::vector<std::size_t> accepted_rows,
                                            const char* default_column) {
    if (n.IsScalar()) {
      auto v = number(n, field);
      if (!v) return std::nullopt;
      return std::vector<double>(std::max<std::size_t>(broadcast, 1), *v);
    }
    if (n.IsSequence()) {
      std::vector<double> out;
      bool ok = true;
      for (std::size_t i = 0; i < n.size(); ++i) {
        auto v = number(n[i], fmt::format("{}[{}]", field, i));
        ok = ok && v.has_value();
        out.push_back(v.value_or(0.0));
      }
      if (!ok) return std::nullopt;
      return out;
    }
    if (n.IsMap()) {
      allow(n, field, {"csv", "column"});
      std::string file, column = default_column;
      read(n, "csv", field + ".csv", file, true);
      read(n, "column", field + ".column", column);
      if (file.empty()) return std::nullopt;
      if (accepted_rows.empty()) {
        error(n, field, "cannot check the CSV length without a valid grid");
        return std::nullopt;
      }
      try {
        return load_series_csv(base_dir / file, accepted_rows, column);
      } catch (const IoError&) {
        throw;
      } catch (const std::exception& e) {
        error(n, field, e.what());
        return std::nullopt;
      }
    }
    error(n, field, "expected a number, a list or {csv: file}");
    return std::nullopt;
  }
};

void read_ee(Reader& r, const YAML::Node& n, Scenario& s) {
  if (!r.map(n, "der.ee")) return;
  r.allow(n, "der.ee", {"segments", "cost_multiplier"});
  EeSpec ee;
  if (auto seg = r.child(n, "segments", "der.ee.segments", true)) {
    if (!seg->IsSequence()) {
      r.error(*seg, "der.ee.segments", "expected a list of {size, cost}");
    } else {
      for (std::size_t i = 0; i < seg->size(); ++i) {
        const auto f = fmt::format("der.ee.segments[{}]", i);
        const YAML::Node item = (*seg)[i];
        if (!r.map(item, f)) continue;
        r.allow(item, f, {"size", "cost"});
        double size = 0.0, cost = 0.0;
        r.read(item, "size", f + ".size", size, true);
        r.read(item, "cost", f + ".cost", cost, true);
        ee.segment_sizes.push_back(size);
        ee.segment_costs.push_back(cost);
      }
    }
  }
  r.read(n, "cost_multiplier", "der.ee.cost_multiplier", ee.cost_multiplier);
  s.ee = ee;
}

void read_pv(Reader& r, const YAML::Node& n, Scenario& s, std::size_t T,
             const std::vector<std::size_t>& rows) {
  if (!r.map(n, "der.pv")) return;
  r.allow(n, "der.pv",
          {"capacity_limit", "unit_cost", "capacity_factor", "capacity_factor_multiplier"});
  PvSpec pv;
  r.read(n, "capacity_limit", "der.pv.capacity_limit", pv.capacity_limit, true);
  r.read(n, "unit_cost", "der.pv.unit_cost", pv.unit_cost, true);
  if (auto cf = r.child(n, "capacity_factor", "der.pv.capacity_factor", true)) {
    pv.capacity_factor =
        r.series(*cf, "der.pv.capacity_factor", T, rows, "capacity_factor").value_or(pv.capacity_factor);
  }
  r.read(n, "capacity_factor_multiplier", "der.pv.capacity_factor_multiplier",
         pv.capacity_factor_multiplier);
  s.pv = pv;
}

void read_dr(Reader& r, const YAML::Node& n, Scenario& s) {
  if (!r.map(n, "der.dr")) return;
  r.allow(n, "der.dr", {"capacity_limit", "unit_cost", "rebound_factor"});
  DrSpec dr;
  r.read(n, "capacity_limit", "der.dr.capacity_limit", dr.capacity_limit, true);
  r.read(n, "unit_cost", "der.dr.unit_cost", dr.unit_cost, true);
  r.read(n, "rebound_factor", "der.dr.rebound_factor", dr.rebound_factor);
  s.dr = dr;
}

void read_es(Reader& r, const YAML::Node& n, Scenario& s) {
  if (!r.map(n, "der.es")) return;
  r.allow(n, "der.es",
          {"capacity_limit", "unit_cost", "charge_efficiency", "discharge_efficiency",
           "energy_power_ratio", "degradation"});
  EsSpec es;
  r.read(n, "capacity_limit", "der.es.capacity_limit", es.capacity_limit, true);
  r.read(n, "unit_cost", "der.es.unit_cost", es.unit_cost, true);
  r.read(n, "charge_efficiency", "der.es.charge_efficiency", es.charge_efficiency);
  r.read(n, "discharge_efficiency", "der.es.discharge_efficiency", es.discharge_efficiency);
  r.read(n, "energy_power_ratio", "der.es.energy_power_ratio", es.energy_power_ratio);
  if (auto d = r.child(n, "degradation", "der.es.degradation", false)) {
    if (d->IsMap()) {
      // the value used plus the figure it was converted from, kept for the record
      r.allow(*d, "der.es.degradation", {"mwh_per_mwh", "table_value", "note"});
      r.read(*d, "mwh_per_mwh", "der.es.degradation", es.degradation, true);
      std::string table, note;
      r.read(*d, "table_value", "der.es.degradation.table_value", table);
      r.read(*d, "note", "der.es.degradation.note", note);
      es.degradation_note = table.empty() ? note : table + (note.empty() ? "" : "; " + note);
    } else {
      r.read(n, "degradation", "der.es.degradation", es.degradation);
    }
  }
  s.es = es;
}

Scenario parse_root(Reader& r, const YAML::Node& root) {
  Scenario s;
  if (!root.IsMap()) {
    r.error(root, "scenario", "top level must be a mapping");
    throw ScenarioError(r.errors);
  }
  r.allow(root, "",
          {"name", "provenance", "grid", "economics", "load", "growth_rate", "der", "solver"});
  r.read(root, "name", "name", s.name);

  if (auto p = r.child(root, "provenance", "provenance", false); p && r.map(*p, "provenance")) {
    for (const auto& kv : *p) {
      const auto key = kv.first.as<std::string>();
      if (kv.second.IsScalar()) {
        s.provenance[key] = kv.second.Scalar();
      } else {
        r.error(kv.second, "provenance." + key, "expected text");
      }
    }
  }

  // grid first: series lengths depend on it
  std::size_t T = 0;
  std::vector<std::size_t> rows;
  if (auto g = r.child(root, "grid", "grid", true); g && r.map(*g, "grid")) {
    r.allow(*g, "grid", {"years", "intervals_per_year", "step_hours", "weights"});
    const auto before = r.errors.size();
    s.grid.years = 0;
    s.grid.intervals_per_year = 0;
    r.read(*g, "years", "grid.years", s.grid.years, true);
    r.read(*g, "intervals_per_year", "grid.intervals_per_year", s.grid.intervals_per_year, true);
    r.read(*g, "step_hours", "grid.step_hours", s.grid.step_hours);
    if (r.errors.size() == before && s.grid.intervals_per_year > 0 && s.grid.years > 0) {
      T = static_cast<std::size_t>(s.grid.intervals_per_year);
      rows = {T, T * static_cast<std::size_t>(s.grid.years)};
    }
    if (auto w = r.child(*g, "weights", "grid.weights", false)) {
      const std::vector<std::size_t> wrows = T ? std::vector<std::size_t>{T} : rows;
      s.grid.weights = r.series(*w, "grid.weights", T, wrows, "weight").value_or(s.grid.weights);
    }
  }

  if (auto e = r.child(root, "economics", "economics", true); e && r.map(*e, "economics")) {
    r.allow(*e, "economics",
            {"discount_rate", "expansion_cost", "capacity_limit", "demand_charge_rate",
             "energy_price"});
    r.read(*e, "discount_rate", "economics.discount_rate", s.economics.discount_rate, true);
    r.read(*e, "expansion_cost", "economics.expansion_cost", s.economics.expansion_cost, true);
    r.read(*e, "capacity_limit", "economics.capacity_limit", s.economics.capacity_limit, true);
    r.read(*e, "demand_charge_rate", "economics.demand_charge_rate",
           s.economics.demand_charge_rate);
    if (auto p = r.child(*e, "energy_price", "economics.energy_price", true)) {
      s.economics.energy_price =
          r.series(*p, "economics.energy_price", T, rows, "price").value_or(std::vector<double>{});
    }
  }

  if (auto l = r.child(root, "load", "load", true); l && r.map(*l, "load")) {
    r.allow(*l, "load", {"profile_csv", "profile"});
    auto csv = r.child(*l, "profile_csv", "load.profile", false);
    auto inline_values = r.child(*l, "profile", "load.profile", false);
    if (csv.has_value() == inline_values.has_value()) {
      r.error(*l, "load", "give exactly one of profile_csv or profile");
    } else if (csv) {
      std::string file;
      r.read(*l, "profile_csv", "load.profile", file);
      if (!T) {
        r.error(*csv, "load.profile", "cannot check the CSV length without a valid grid");
      } else if (!file.empty()) {
        try {
          s.base_profile = load_profile_csv(r.base_dir / file, T);
        } catch (const IoError&) {
          throw;
        } catch (const std::exception& ex) {
          r.error(*csv, "load.profile", ex.what());
        }
      }
    } else if (!inline_values->IsSequence()) {
      r.error(*inline_values, "load.profile", "expected a list of MW values");
    } else {
      s.base_profile = r.series(*inline_values, "load.profile", T, rows, "mw").value_or(s.base_profile);
    }
  }

  r.read(root, "growth_rate", "growth_rate", s.growth_rate);

  if (auto d = r.child(root, "der", "der", false); d && r.map(*d, "der")) {
    r.allow(*d, "der", {"ee", "pv", "dr", "es"});
    if (auto n = r.child(*d, "ee", "der.ee", false)) read_ee(r, *n, s);
    if (auto n = r.child(*d, "pv", "der.pv", false)) read_pv(r, *n, s, T, rows);
    if (auto n = r.child(*d, "dr", "der.dr", false)) read_dr(r, *n, s);
    if (auto n = r.child(*d, "es", "der.es", false)) read_es(r, *n, s);
  }

  if (auto sv = r.child(root, "solver", "solver", false); sv && r.map(*sv, "solver")) {
    r.allow(*sv, "solver",
            {"rc_tolerance", "max_iterations", "stagnation_window", "stagnation_tolerance",
             "smoothing"});
    r.read(*sv, "rc_tolerance", "solver.rc_tolerance", s.solver.rc_tolerance);
    r.read(*sv, "max_iterations", "solver.max_iterations", s.solver.max_iterations);
    r.read(*sv, "stagnation_window", "solver.stagnation_window", s.solver.stagnation_window);
    r.read(*sv, "stagnation_tolerance", "solver.stagnation_tolerance",
           s.solver.stagnation_tolerance);
    r.read(*sv, "smoothing", "solver.smoothing", s.solver.smoothing);
  }
  return s;
}

// Prefix a semantic message with the line of the longest field path it starts with.
std::string locate(const Reader& r, const std::string& msg) {
  std::size_t best = 0;
  int line = 0;
  for (const auto& [field, l] : r.lines) {
    if (field.size() > best && msg.compare(0, field.size(), field) == 0 &&
        (msg.size() == field.size() || std::string_view(" [.:").find(msg[field.size()]) !=
                                           std::string_view::npos)) {
      best = field.size();
      line = l;
    }
  }
  return line ? fmt::format("{}:{}: {}", r.label, line, msg) : fmt::format("{}: {}", r.label, msg);
}

bool finite_nonnegative(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

Scenario parse_scenario(std::string_view text, const fs::path& base_dir, std::string_view label) {
  Reader r{std::string(label), base_dir, {}, {}};
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ScenarioError({fmt::format("{}:{}:{}: parse error: {}", label, e.mark.line + 1,
                                     e.mark.column + 1, e.msg)});
  }
  Scenario s = parse_root(r, root);
  if (s.name.empty()) s.name = fs::path(label).stem().string();
  if (r.errors.empty()) {
    for (const auto& msg : validate_scenario(s)) r.errors.push_back(locate(r, msg));
  }
  if (!r.errors.empty()) throw ScenarioError(r.errors);
  return s;
}

Scenario load_scenario(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("{}: cannot open for reading", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.parent_path(), path.string());
}

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> errs;
  const auto guard = [&](const std::string& scope, const std::function<void()>& f) {
    try {
      f();
    } catch (const std::exception& e) {
      std::string msg = e.what();
      if (!scope.empty() && msg.rfind(scope, 0) != 0) msg = scope + ": " + msg;
      errs.push_back(std::move(msg));
    }
  };

  std::optional<TimeGrid> grid;
  guard("grid", [&] { grid = s.grid.build(); });
  for (auto& msg : s.economics.problems()) errs.push_back(std::move(msg));
  if (grid) guard("economics.energy_price", [&] { (void)s.economics.price(*grid, 1, 0); });

  bool profile_ok = !s.base_profile.empty();
  if (s.base_profile.empty()) errs.push_back("load.profile is empty");
  if (grid && !s.base_profile.empty() &&
      s.base_profile.size() != static_cast<std::size_t>(grid->intervals_per_year())) {
    errs.push_back(fmt::format("load.profile has {} intervals, grid expects {}",
                               s.base_profile.size(), grid->intervals_per_year()));
    profile_ok = false;
  }
  if (!std::all_of(s.base_profile.begin(), s.base_profile.end(), finite_nonnegative)) {
    errs.push_back("load.profile values must be finite and >= 0");
    profile_ok = false;
  }
  if (!(s.growth_rate > -1.0) || !std::isfinite(s.growth_rate)) {
    errs.push_back("growth_rate must be > -1");
  }

  if (s.ee) {
    if (!(s.ee->cost_multiplier > 0.0) || !std::isfinite(s.ee->cost_multiplier)) {
      errs.push_back("der.ee.cost_multiplier must be > 0");
    } else {
      guard("der.ee", [&] {
        const auto p = ee_params(*s.ee);
        p.validate();
        if (grid && profile_ok) (void)der::build_ee_block(p, s.base_profile, *grid);
      });
    }
  }
  if (s.pv) {
    const double m = s.pv->capacity_factor_multiplier;
    const double top = s.pv->capacity_factor.empty()
                           ? 0.0
                           : *std::max_element(s.pv->capacity_factor.begin(),
                                               s.pv->capacity_factor.end());
    if (!finite_nonnegative(m)) {
      errs.push_back("der.pv.capacity_factor_multiplier must be >= 0");
    } else if (top <= 1.0 && top * m > 1.0) {
      errs.push_back(fmt::format(
          "der.pv.capacity_factor_multiplier {} lifts the largest capacity factor above 1", m));
    } else {
      guard("der.pv", [&] {
        const auto p = pv_params(*s.pv);
        p.validate();
        if (grid) (void)der::build_pv_block(p, *grid);
      });
    }
  }
  if (s.dr) {
    guard("der.dr", [&] {
      const auto p = dr_params(*s.dr);
      p.validate();
      if (grid) (void)der::build_dr_block(p, *grid);
    });
  }
  if (s.es) {
    guard("der.es", [&] {
      const auto p = es_params(*s.es);
      p.validate();
      if (grid) (void)der::build_es_block(p, *grid);
    });
  }

  const auto& sv = s.solver;
  if (!(sv.rc_tolerance >= 0.0) || !std::isfinite(sv.rc_tolerance)) {
    errs.push_back("solver.rc_tolerance must be >= 0");
  }
  if (sv.max_iterations < 1) errs.push_back("solver.max_iterations must be >= 1");
  if (sv.stagnation_window < 1) errs.push_back("solver.stagnation_window must be >= 1");
  if (!(sv.stagnation_tolerance >= 0.0)) errs.push_back("solver.stagnation_tolerance must be >= 0");
  if (!(sv.smoothing >= 0.0 && sv.smoothing < 1.0)) {
    errs.push_back("solver.smoothing must lie in [0, 1)");
  }
  return errs;
}

der::EeParams ee_params(const EeSpec& s) {
  der::EeParams p;
  p.segment_sizes = s.segment_sizes;
  p.segment_marginal_costs = s.segment_costs;
  for (auto& c : p.segment_marginal_costs) c *= s.cost_multiplier;
  return p;
}

der::PvParams pv_params(const PvSpec& s) {
  der::PvParams p;
  p.capacity_limit = s.capacity_limit;
  p.unit_cost = s.unit_cost * 1e6;  // $/W -> $/MW
  p.capacity_factor = s.capacity_factor;
  for (auto& c : p.capacity_factor) c *= s.capacity_factor_multiplier;
  return p;
}

der::DrParams dr_params(const DrSpec& s) {
  return {s.capacity_limit, s.unit_cost * 1e3, s.rebound_factor};  // $/kW -> $/MW
}

der::EsParams es_params(const EsSpec& s) {
  der::EsParams p;
  p.capacity_limit = s.capacity_limit;
  p.unit_cost = s.unit_cost * 1e3;  // $/kWh -> $/MWh
  p.charge_efficiency = s.charge_efficiency;
  p.discharge_efficiency = s.discharge_efficiency;
  p.degradation = s.degradation;
  p.energy_power_ratio = s.energy_power_ratio;
  return p;
}

PlanningProblem build_problem(const Scenario& s) {
  if (auto errs = validate_scenario(s); !errs.empty()) throw ScenarioError(std::move(errs));
  const TimeGrid grid = s.grid.build();
  PlanningProblem p{grid, s.economics, grow_load(s.base_profile, s.growth_rate, grid), {},
                    s.solver};
  if (s.ee) p.blocks.push_back(der::build_ee_block(ee_params(*s.ee), s.base_profile, grid));
  if (s.pv) p.blocks.push_back(der::build_pv_block(pv_params(*s.pv), grid));
  if (s.dr) p.blocks.push_back(der::build_dr_block(dr_params(*s.dr), grid));
  if (s.es) p.blocks.push_back(der::build_es_block(es_params(*s.es), grid));
  return p;
}

}  // namespace nwa::app
