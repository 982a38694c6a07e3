#include "nwa/app/sweep.hpp"

#include <fmt/format.h>

#include <fstream>
#include <optional>

#include "nwa/dw/decomposition.hpp"

namespace nwa::app {
namespace {

template <class T>
T& section(std::optional<T>& opt, std::string_view path) {
  if (!opt) {
    throw ValidationError(
        fmt::format("{}: the scenario has no {} section", path, path.substr(0, 6)));
  }
  return *opt;
}

using Setter = void (*)(Scenario&, std::string_view, double);

struct Entry {
  std::string path;
  Setter set;
};

const std::vector<Entry>& table() {
  static const std::vector<Entry> entries = {
      {"economics.discount_rate", [](Scenario& s, auto, double v) { s.economics.discount_rate = v; }},
      {"economics.expansion_cost", [](Scenario& s, auto, double v) { s.economics.expansion_cost = v; }},
      {"economics.capacity_limit", [](Scenario& s, auto, double v) { s.economics.capacity_limit = v; }},
      {"economics.demand_charge_rate",
       [](Scenario& s, auto, double v) { s.economics.demand_charge_rate = v; }},
      {"growth_rate", [](Scenario& s, auto, double v) { s.growth_rate = v; }},
      {"der.ee.cost_multiplier",
       [](Scenario& s, auto p, double v) { section(s.ee, p).cost_multiplier = v; }},
      {"der.pv.capacity_limit",
       [](Scenario& s, auto p, double v) { section(s.pv, p).capacity_limit = v; }},
      {"der.pv.unit_cost", [](Scenario& s, auto p, double v) { section(s.pv, p).unit_cost = v; }},
      {"der.pv.capacity_factor_multiplier",
       [](Scenario& s, auto p, double v) { section(s.pv, p).capacity_factor_multiplier = v; }},
      {"der.dr.capacity_limit",
       [](Scenario& s, auto p, double v) { section(s.dr, p).capacity_limit = v; }},
      {"der.dr.unit_cost", [](Scenario& s, auto p, double v) { section(s.dr, p).unit_cost = v; }},
      {"der.dr.rebound_factor",
       [](Scenario& s, auto p, double v) { section(s.dr, p).rebound_factor = v; }},
      {"der.es.capacity_limit",
       [](Scenario& s, auto p, double v) { section(s.es, p).capacity_limit = v; }},
      {"der.es.unit_cost", [](Scenario& s, auto p, double v) { section(s.es, p).unit_cost = v; }},
      {"der.es.degradation",
       [](Scenario& s, auto p, double v) { section(s.es, p).degradation = v; }},
      {"solver.max_iterations",
       [](Scenario& s, auto, double v) { s.solver.max_iterations = static_cast<int>(v); }},
      {"solver.smoothing", [](Scenario& s, auto, double v) { s.solver.smoothing = v; }},
  };
  return entries;
}

std::vector<std::string> der_names(const Scenario& s) {
  std::vector<std::string> out;
  if (s.ee) out.push_back("ee");
  if (s.pv) out.push_back("pv");
  if (s.dr) out.push_back("dr");
  if (s.es) out.push_back("es");
  return out;
}

}  // namespace

const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : table()) out.push_back(e.path);
    return out;
  }();
  return names;
}

void set_parameter(Scenario& s, std::string_view path, double value) {
  for (const auto& e : table()) {
    if (e.path == path) {
      e.set(s, path, value);
      return;
    }
  }
  throw ValidationError(fmt::format("unknown sweep parameter '{}'", path));
}

SweepTable run_sweep(const Scenario& base, const SweepSpec& spec,
                     const std::function<void(const SweepRow&)>& on_row) {
  if (spec.values.empty()) throw ValidationError("sweep needs at least one value");
  std::vector<Scenario> runs;
  std::vector<std::string> errors;
  for (double v : spec.values) {
    Scenario s = base;
    set_parameter(s, spec.parameter, v);
    for (const auto& e : validate_scenario(s)) {
      errors.push_back(fmt::format("{} = {}: {}", spec.parameter, v, e));
    }
    runs.push_back(std::move(s));
  }
  if (!errors.empty()) throw ScenarioError(std::move(errors));

  SweepTable out{spec.parameter, der_names(base), {}};
  for (std::size_t i = 0; i < runs.size(); ++i) {
    SweepRow row;
    row.value = spec.values[i];
    try {
      const Plan plan = dw::run_dwda(build_problem(runs[i]));
      row.ok = true;
      row.expansion_year = plan.expansion_year;
      for (const auto& name : out.ders) {
        const auto* d = plan.find(name);
        row.capacities.push_back(d ? d->capacity : 0.0);
      }
      row.costs = plan.costs;
      row.objective = plan.objective;
      row.converged = plan.converged;
      row.iterations = static_cast<int>(plan.iterations.size());
    } catch (const std::exception& e) {
      row.error = e.what();
      row.capacities.assign(out.ders.size(), 0.0);
    }
    if (on_row) on_row(row);
    out.rows.push_back(std::move(row));
  }
  return out;
}

void write_sweep_csv(const SweepTable& t, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError(fmt::format("{}: cannot open for writing", file.string()));
  out << "value,ok,converged,iterations,expansion_year";
  for (const auto& d : t.ders) out << ',' << d << "_capacity";
  out << ",nwa_investment,nwa_operation,demand_charge,expansion,objective,error\n";
  for (const auto& r : t.rows) {
    out << fmt::format("{},{},{},{},{}", r.value, r.ok ? 1 : 0, r.converged ? 1 : 0, r.iterations,
                       r.expansion_year);
    for (double c : r.capacities) out << fmt::format(",{}", c);
    std::string err = r.error;
    for (auto& ch : err) {
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    }
    out << fmt::format(",{},{},{},{},{},{}\n", r.costs.nwa_investment, r.costs.nwa_operation,
                       r.costs.demand_charge, r.costs.expansion, r.objective, err);
  }
  if (!out.flush()) throw IoError(fmt::format("{}: write failed", file.string()));
}

}  // namespace nwa::app
