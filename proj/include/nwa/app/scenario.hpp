#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nwa/core/errors.hpp"
#include "nwa/der/builders.hpp"
#include "nwa/dw/problem.hpp"

namespace nwa::app {

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every problem found in a scenario, not just the first one.
class ScenarioError : public ValidationError {
 public:
  explicit ScenarioError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct GridSpec {
  int years = 1;
  int intervals_per_year = 8760;
  double step_hours = 1.0;
  std::vector<double> weights;  // empty = equal weights covering 8760 h

  TimeGrid build() const;
};

// Costs are kept in the units planners quote them in; build_problem converts.

struct EeSpec {
  std::vector<double> segment_sizes;  // fraction of year-0 load
  std::vector<double> segment_costs;  // $ per unit fraction
  double cost_multiplier = 1.0;
};

struct PvSpec {
  double capacity_limit = 0.0;  // MW
  double unit_cost = 0.0;       // $/W
  std::vector<double> capacity_factor;
  double capacity_factor_multiplier = 1.0;
};

struct DrSpec {
  double capacity_limit = 0.0;  // MW
  double unit_cost = 0.0;       // $/kW
  double rebound_factor = 1.2;
};

struct EsSpec {
  double capacity_limit = 0.0;  // MWh
  double unit_cost = 0.0;       // $/kWh
  double charge_efficiency = 0.97;
  double discharge_efficiency = 0.95;
  double energy_power_ratio = 4.0;
  double degradation = 0.0;  // MWh of capacity per MWh of throughput
  std::string degradation_note;
};

struct Scenario {
  std::string name;
  std::map<std::string, std::string> provenance;
  GridSpec grid;
  Economics economics;
  YearProfile base_profile;
  double growth_rate = 0.0;
  std::optional<EeSpec> ee;
  std::optional<PvSpec> pv;
  std::optional<DrSpec> dr;
  std::optional<EsSpec> es;
  SolverSettings solver;
};

/// Reads a YAML scenario; CSV side files resolve against its directory.
/// Throws IoError when the file is unreadable, ScenarioError otherwise.
Scenario load_scenario(const std::filesystem::path& path);

/// Same as load_scenario on in-memory text. `label` prefixes messages.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir,
                        std::string_view label = "<scenario>");

/// Semantic checks on an assembled scenario; empty when valid. Messages
/// start with the field path.
std::vector<std::string> validate_scenario(const Scenario& s);

der::EeParams ee_params(const EeSpec& s);
der::PvParams pv_params(const PvSpec& s);
der::DrParams dr_params(const DrSpec& s);
der::EsParams es_params(const EsSpec& s);

/// Grid, grown load and compiled blocks (ee, pv, dr, es order). Throws
/// ScenarioError when validate_scenario complains.
PlanningProblem build_problem(const Scenario& s);

}  // namespace nwa::app
