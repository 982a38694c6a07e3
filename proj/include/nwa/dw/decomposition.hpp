#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nwa/dw/problem.hpp"
#include "nwa/lp/linear_program.hpp"

namespace nwa::dw {

/// One column of the master: the summed optimum of every resource
/// subproblem under one set of prices.
struct Proposal {
  int index = 0;
  Money cost = 0.0;  // investment + present energy cost, penalty excluded
  Money investment_cost = 0.0;
  Money operating_cost = 0.0;
  LoadSeries load;
  std::vector<std::vector<double>> solutions;  // per block, joint variable order
};

struct MasterSolution {
  int delta = 0;
  Money objective = 0.0;
  std::vector<double> lambda;
  std::vector<Megawatts> peaks;
  /// Price per MW at each flat grid cell, to be multiplied by the cell weight.
  std::vector<double> coupling_duals;
  double convexity_dual = 0.0;
  /// MP(j) for every j the sweep evaluated; NaN where infeasible or unvisited.
  std::vector<double> visited;
};

/// Subproblem LP: block rows and bounds, objective = investment cost +
/// present energy cost + sum over cells of duals[g] * weight * load. With
/// include_costs false only the price term remains (feasibility pricing).
lp::LinearProgram build_subproblem(const der::DerBlock& block,
                                   std::span<const double> coupling_duals,
                                   const Economics& econ, const TimeGrid& grid,
                                   bool include_costs = true);

/// Prices every block and sums the optima into one proposal. `warm` holds
/// one basis per block, reused and updated when given.
Proposal solve_subproblems(std::span<const der::DerBlock> blocks,
                           std::span<const double> coupling_duals, const Economics& econ,
                           const TimeGrid& grid, bool include_costs = true,
                           std::vector<lp::Basis>* warm = nullptr);

/// The all-zero proposal; always feasible since every block admits zero
/// investment and idle operation.
Proposal do_nothing_proposal(const PlanningProblem& problem);

/// sum over cells of duals[g] * weight(t) * load[g]
double price_of_load(const LoadSeries& load, std::span<const double> coupling_duals,
                     const TimeGrid& grid);

double reduced_cost(const Proposal& p, std::span<const double> coupling_duals,
                    double convexity_dual, const TimeGrid& grid);

/// Final basis of a master solve and the pool size it was built for.
struct WarmBasis {
  std::size_t proposals = 0;
  lp::Basis basis;
};

/// Per-j master bases kept between solves while the pool only grows. Purely
/// a speed-up: results do not depend on it.
struct MasterWarmStart {
  std::vector<WarmBasis> optimal;
  std::vector<WarmBasis> phase1;
};

/// MP(j): expansion fixed at year j, capacity limit rows for years 1..j.
lp::LinearProgram build_master(std::span<const Proposal> pool, int j,
                               const PlanningProblem& problem);

/// Solves MP(j); nullopt when infeasible.
std::optional<MasterSolution> solve_master_at(std::span<const Proposal> pool, int j,
                                              const PlanningProblem& problem,
                                              MasterWarmStart* warm = nullptr);

/// Relative tolerance used when comparing MP(j) values across j.
inline constexpr double kSweepTolerance = 1e-9;

/// Sequential sweep over j = 0, 1, ...: stops at the first j whose value is
/// infeasible or strictly larger than the previous one and returns j-1;
/// returns `horizon` if it gets there. `evaluate` returns nullopt for
/// infeasible j. Throws std::logic_error if j = 0 is infeasible.
int first_rise_sweep(int horizon, const std::function<std::optional<double>(int)>& evaluate);

/// Master problem over the pool via the sweep.
MasterSolution solve_master(std::span<const Proposal> pool, const PlanningProblem& problem,
                            MasterWarmStart* warm = nullptr);

/// Column generation with the sweep master.
Plan run_dwda(const PlanningProblem& problem);

/// Plan from a master solution: lambda-weighted schedules and cost split.
Plan reconstruct_plan(std::span<const Proposal> pool, const MasterSolution& master,
                      const PlanningProblem& problem);

}  // namespace nwa::dw
