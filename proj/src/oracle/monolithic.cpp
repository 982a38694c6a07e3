#include "nwa/oracle/monolithic.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include <fmt/format.h>

namespace nwa::oracle {
namespace {

bool better_or_tied(double candidate, double best) {
  return candidate <= best + dw::kSweepTolerance * std::max(1.0, std::abs(best));
}

}  // namespace

lp::LinearProgram build_monolithic(const PlanningProblem& problem, int j,
                                   MonolithicLayout* layout) {
  const auto& grid = problem.grid;
  const auto& econ = problem.economics;
  const int A = grid.years();
  if (j < 0 || j > A) throw std::out_of_range(fmt::format("expansion year {} outside 0..{}", j, A));

  const auto energy = energy_cost_coefficients(econ, grid);
  lp::LinearProgram out;
  MonolithicLayout lay;
  for (const auto& block : problem.blocks) {
    const int offset = out.variable_count();
    lay.block_offset.push_back(offset);
    const auto op_cost = der::operating_cost_vector(block, energy);
    for (int k = 0; k < block.investment_count(); ++k) {
      const auto& v = block.investment_vars[static_cast<std::size_t>(k)];
      out.add_variable(v.name, v.lower, v.upper, block.investment_cost[static_cast<std::size_t>(k)]);
    }
    for (int k = 0; k < block.operating_count(); ++k) {
      const auto& v = block.operating_vars[static_cast<std::size_t>(k)];
      out.add_variable(v.name, v.lower, v.upper, op_cost[static_cast<std::size_t>(k)]);
    }
    for (const auto& row : block.constraints) {
      auto terms = row.terms;
      for (auto& t : terms) t.column += offset;
      out.add_row(row.name, std::move(terms), row.sense, row.rhs);
    }
  }
  lay.first_peak = out.variable_count();
  for (int a = 1; a <= A; ++a) {
    out.add_variable(fmt::format("peak[{}]", a), -lp::kInfinity, lp::kInfinity,
                     discount_factor(econ.discount_rate, a) * econ.demand_charge_rate);
  }
  for (int a = 1; a <= A; ++a) {
    for (int t = 0; t < grid.intervals_per_year(); ++t) {
      const auto g = static_cast<std::size_t>(grid.index(a, t));
      std::vector<lp::Term> terms;
      for (std::size_t b = 0; b < problem.blocks.size(); ++b) {
        const auto& block = problem.blocks[b];
        for (const auto& t2 : block.load_map[g]) {
          terms.push_back({lay.block_offset[b] + block.operating_column(t2.column), t2.coefficient});
        }
      }
      terms.push_back({lay.first_peak + a - 1, -1.0});
      out.add_row(fmt::format("peak_def[{},{}]", a, t), std::move(terms), lp::RowSense::less_equal,
                  -problem.base_load.values()[g]);
    }
  }
  for (int a = 1; a <= j; ++a) {
    out.add_row(fmt::format("limit[{}]", a), {{lay.first_peak + a - 1, 1.0}},
                lp::RowSense::less_equal, econ.capacity_limit);
  }
  out.set_objective_offset(present_expansion_cost(j, econ));
  if (layout) *layout = std::move(lay);
  return out;
}

Plan solve_monolithic(const PlanningProblem& problem, long max_variables) {
  problem.validate();
  const auto& grid = problem.grid;
  const int A = grid.years();
  long vars = A;
  for (const auto& b : problem.blocks) vars += b.variable_count();
  if (vars > max_variables) {
    throw SizeError(fmt::format(
        "monolithic LP would have {} variables (limit {}); use the decomposition engine instead",
        vars, max_variables));
  }

  Plan plan;
  plan.engine = "monolithic";
  plan.year_objectives.assign(static_cast<std::size_t>(A) + 1,
                              std::numeric_limits<double>::quiet_NaN());
  std::optional<lp::LpSolution> best;
  MonolithicLayout layout;
  for (int j = 0; j <= A; ++j) {
    MonolithicLayout lay;
    const auto sol = lp::solve_lp(build_monolithic(problem, j, &lay));
    if (sol.status == lp::SolveStatus::infeasible) continue;
    if (!sol.optimal()) throw lp::SolverFailure(fmt::format("monolithic LP at j={} is unbounded", j));
    plan.year_objectives[static_cast<std::size_t>(j)] = sol.objective;
    if (!best || better_or_tied(sol.objective, best->objective)) {
      best = sol;
      layout = std::move(lay);
      plan.expansion_year = j;
    }
  }
  if (!best) throw std::logic_error("monolithic LP infeasible for j = 0");

  plan.objective = best->objective;
  plan.net_load = problem.base_load;
  for (std::size_t b = 0; b < problem.blocks.size(); ++b) {
    const auto& block = problem.blocks[b];
    const auto first = best->primal.begin() + layout.block_offset[b];
    DerResult r;
    r.name = block.name;
    r.capacity_unit = block.capacity_unit;
    r.investment.assign(first, first + block.investment_count());
    r.operating.assign(first + block.investment_count(), first + block.variable_count());
    for (const auto& v : block.investment_vars) r.investment_names.push_back(v.name);
    for (double v : r.investment) r.capacity += v;
    r.load = der::der_load(block, r.operating, grid);
    r.investment_cost = der::der_investment_cost(block, r.investment);
    r.operating_cost = present_energy_cost(r.load, problem.economics, grid);
    plan.net_load += r.load;
    plan.costs.nwa_investment += r.investment_cost;
    plan.costs.nwa_operation += r.operating_cost;
    plan.ders.push_back(std::move(r));
  }
  plan.peaks = yearly_peak(plan.net_load);
  plan.costs.demand_charge = present_demand_charge(plan.peaks, problem.economics);
  plan.costs.expansion = present_expansion_cost(plan.expansion_year, problem.economics);
  plan.termination = Termination::exact;
  return plan;
}

std::pair<int, double> exhaustive_master(std::span<const dw::Proposal> pool,
                                         const PlanningProblem& problem) {
  int best_j = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= problem.grid.years(); ++j) {
    const auto ms = dw::solve_master_at(pool, j, problem);
    if (!ms) continue;
    if (best_j < 0 || better_or_tied(ms->objective, best)) {
      best_j = j;
      best = ms->objective;
    }
  }
  return {best_j, best};
}

}  // namespace nwa::oracle
