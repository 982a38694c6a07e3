#include <stdexcept>

#include <fmt/format.h>

#include "nwa/core/errors.hpp"
#include "nwa/dw/decomposition.hpp"

namespace nwa::dw {

lp::LinearProgram build_subproblem(const der::DerBlock& block,
                                   std::span<const double> coupling_duals,
                                   const Economics& econ, const TimeGrid& grid,
                                   bool include_costs) {
  if (coupling_duals.size() != static_cast<std::size_t>(grid.size())) {
    throw ShapeError(fmt::format("{} duals for a grid of {} cells", coupling_duals.size(),
                                 grid.size()));
  }
  std::vector<double> cell_price(static_cast<std::size_t>(grid.size()), 0.0);
  if (include_costs) cell_price = energy_cost_coefficients(econ, grid);
  for (int a = 1; a <= grid.years(); ++a) {
    for (int t = 0; t < grid.intervals_per_year(); ++t) {
      const auto g = static_cast<std::size_t>(grid.index(a, t));
      cell_price[g] += coupling_duals[g] * grid.weight(t);
    }
  }
  const auto op_cost = der::operating_cost_vector(block, cell_price);

  lp::LinearProgram lp;
  for (int k = 0; k < block.investment_count(); ++k) {
    const auto& v = block.investment_vars[static_cast<std::size_t>(k)];
    lp.add_variable(v.name, v.lower, v.upper,
                    include_costs ? block.investment_cost[static_cast<std::size_t>(k)] : 0.0);
  }
  for (int k = 0; k < block.operating_count(); ++k) {
    const auto& v = block.operating_vars[static_cast<std::size_t>(k)];
    lp.add_variable(v.name, v.lower, v.upper, op_cost[static_cast<std::size_t>(k)]);
  }
  for (const auto& row : block.constraints) lp.add_row(row.name, row.terms, row.sense, row.rhs);
  return lp;
}

Proposal solve_subproblems(std::span<const der::DerBlock> blocks,
                           std::span<const double> coupling_duals, const Economics& econ,
                           const TimeGrid& grid, bool include_costs,
                           std::vector<lp::Basis>* warm) {
  Proposal p;
  p.load = LoadSeries::zeros(grid);
  if (warm) warm->resize(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& block = blocks[b];
    const auto lp = build_subproblem(block, coupling_duals, econ, grid, include_costs);
    // Only costs change between rounds, so the last basis is still feasible.
    const auto sol = lp::solve_lp(lp, {}, warm ? &(*warm)[b] : nullptr);
    if (warm) (*warm)[b] = sol.basis;
    if (!sol.optimal()) {
      // Zero investment with idle operation is always feasible and every
      // block is bounded, so this is a model construction bug.
      throw std::logic_error(
          fmt::format("subproblem '{}' is {}", block.name, lp::to_string(sol.status)));
    }
    const std::span<const double> x(sol.primal);
    const auto inv = x.first(static_cast<std::size_t>(block.investment_count()));
    const auto op = x.subspan(static_cast<std::size_t>(block.investment_count()));
    auto load = der::der_load(block, op, grid);
    p.investment_cost += der::der_investment_cost(block, inv);
    p.operating_cost += present_energy_cost(load, econ, grid);
    p.load += load;
    p.solutions.push_back(sol.primal);
  }
  p.cost = p.investment_cost + p.operating_cost;
  return p;
}

Proposal do_nothing_proposal(const PlanningProblem& problem) {
  Proposal p;
  p.load = LoadSeries::zeros(problem.grid);
  for (const auto& b : problem.blocks) {
    p.solutions.emplace_back(static_cast<std::size_t>(b.variable_count()), 0.0);
  }
  return p;
}

double price_of_load(const LoadSeries& load, std::span<const double> coupling_duals,
                     const TimeGrid& grid) {
  if (!load.matches(grid) || coupling_duals.size() != load.size()) {
    throw ShapeError("load and duals do not match the grid");
  }
  double total = 0.0;
  for (int a = 1; a <= grid.years(); ++a) {
    for (int t = 0; t < grid.intervals_per_year(); ++t) {
      const auto g = static_cast<std::size_t>(grid.index(a, t));
      total += coupling_duals[g] * grid.weight(t) * load.values()[g];
    }
  }
  return total;
}

double reduced_cost(const Proposal& p, std::span<const double> coupling_duals,
                    double convexity_dual, const TimeGrid& grid) {
  return p.cost + price_of_load(p.load, coupling_duals, grid) - convexity_dual;
}

}  // namespace nwa::dw
