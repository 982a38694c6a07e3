#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "nwa/app/scenario.hpp"

namespace nwa::app {

struct SweepSpec {
  std::string parameter;  // e.g. der.es.unit_cost
  std::vector<double> values;
};

/// Paths run_sweep understands, in the units of the scenario file.
const std::vector<std::string>& sweep_parameters();

/// Sets one parameter; throws ValidationError for an unknown path or a DER
/// section the scenario does not have.
void set_parameter(Scenario& s, std::string_view path, double value);

struct SweepRow {
  double value = 0.0;
  bool ok = false;
  std::string error;  // solver failure, when !ok
  int expansion_year = 0;
  std::vector<double> capacities;  // one per SweepTable::ders entry
  CostBreakdown costs;
  Money objective = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct SweepTable {
  std::string parameter;
  std::vector<std::string> ders;
  std::vector<SweepRow> rows;  // same order as the value list
};

/// One full decomposition run per value. Every value is checked against
/// the scenario rules first (ScenarioError listing all bad values); solver
/// failures are recorded in their row and the sweep moves on.
SweepTable run_sweep(const Scenario& base, const SweepSpec& spec,
                     const std::function<void(const SweepRow&)>& on_row = {});

/// value, ok, error, expansion_year, <der>_capacity..., cost columns, objective.
void write_sweep_csv(const SweepTable& table, const std::filesystem::path& file);

}  // namespace nwa::app
