#pragma once

#include <string>
#include <vector>

#include "nwa/core/economics.hpp"
#include "nwa/core/load.hpp"
#include "nwa/core/time_grid.hpp"
#include "nwa/der/der_block.hpp"

namespace nwa {

struct SolverSettings {
  double rc_tolerance = 1e-5;  // relative to |master objective|
  int max_iterations = 200;
  int stagnation_window = 3;
  double stagnation_tolerance = 1e-9;
  /// Weight on the stability center when smoothing pricing duals; 0 prices
  /// at the master duals only.
  double smoothing = 0.5;
};

/// Everything both engines need: grid, money, grown base load and the
/// compiled resource blocks.
struct PlanningProblem {
  TimeGrid grid;
  Economics economics;
  LoadSeries base_load;
  std::vector<der::DerBlock> blocks;
  SolverSettings settings;

  void validate() const;
};

struct DerResult {
  std::string name;
  std::string capacity_unit;
  double capacity = 0.0;  // sum of investment variables
  std::vector<std::string> investment_names;
  std::vector<double> investment;
  std::vector<double> operating;
  LoadSeries load;
  Money investment_cost = 0.0;
  Money operating_cost = 0.0;
};

struct CostBreakdown {
  Money nwa_investment = 0.0;
  Money nwa_operation = 0.0;
  Money demand_charge = 0.0;
  Money expansion = 0.0;

  Money total() const { return nwa_investment + nwa_operation + demand_charge + expansion; }
};

struct IterationRecord {
  int iteration = 0;
  Money master_objective = 0.0;
  double reduced_cost = 0.0;
  int delta = 0;
  int pool_size = 0;
  Money lower_bound = 0.0;
};

enum class Termination { reduced_cost, stagnation, iteration_limit, exact };

const char* to_string(Termination t);

struct Plan {
  std::string engine;
  int expansion_year = 0;
  std::vector<DerResult> ders;
  std::vector<Megawatts> peaks;
  LoadSeries net_load;
  CostBreakdown costs;
  Money objective = 0.0;
  bool converged = true;
  Termination termination = Termination::exact;
  Money bound_gap = 0.0;
  /// Objective with expansion fixed at year j, NaN where infeasible.
  std::vector<double> year_objectives;
  std::vector<IterationRecord> iterations;

  const DerResult* find(std::string_view name) const;
};

}  // namespace nwa
