#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "feasibility_master.hpp"
#include "nwa/core/errors.hpp"
#include "nwa/dw/decomposition.hpp"

namespace nwa::dw {
namespace {

using lp::RowSense;
using lp::Term;

struct MasterLayout {
  lp::LinearProgram lp;
  int first_peak = 0;
  int first_lambda = 0;
  int first_coupling_row = 0;
  int convexity_row = 0;
};

// Shared skeleton of MP(j) and its phase-1 variant. Coupling rows are scaled
// by the interval weight so their duals are prices per represented MW.
MasterLayout build_layout(std::span<const Proposal> pool, int j, const PlanningProblem& problem,
                          bool phase1) {
  const auto& grid = problem.grid;
  const auto& econ = problem.economics;
  const int A = grid.years();
  if (pool.empty()) throw std::invalid_argument("master needs at least one proposal");
  if (j < 0 || j > A) throw std::out_of_range(fmt::format("expansion year {} outside 0..{}", j, A));
  for (const auto& p : pool) {
    if (!p.load.matches(grid)) throw ShapeError("proposal load does not match the grid");
  }

  // Peaks first so that appending proposals appends columns and a stored
  // basis stays aligned.
  MasterLayout m;
  m.first_peak = 0;
  for (int a = 1; a <= A; ++a) {
    const double cost = phase1 ? 0.0 : discount_factor(econ.discount_rate, a) * econ.demand_charge_rate;
    m.lp.add_variable(fmt::format("peak[{}]", a), -lp::kInfinity, lp::kInfinity, cost);
  }
  m.first_lambda = m.lp.variable_count();
  for (std::size_t k = 0; k < pool.size(); ++k) {
    m.lp.add_variable(fmt::format("lambda[{}]", k), 0.0, lp::kInfinity,
                      phase1 ? 0.0 : pool[k].cost);
  }
  m.first_coupling_row = m.lp.row_count();
  for (int a = 1; a <= A; ++a) {
    for (int t = 0; t < grid.intervals_per_year(); ++t) {
      const auto g = static_cast<std::size_t>(grid.index(a, t));
      const double w = grid.weight(t);
      std::vector<Term> terms;
      terms.reserve(pool.size() + 1);
      for (std::size_t k = 0; k < pool.size(); ++k) {
        const double l = pool[k].load.values()[g];
        if (l != 0.0) terms.push_back({m.first_lambda + static_cast<int>(k), w * l});
      }
      terms.push_back({m.first_peak + a - 1, -w});
      m.lp.add_row(fmt::format("coupling[{},{}]", a, t), std::move(terms), RowSense::less_equal,
                   -w * problem.base_load.values()[g]);
    }
  }
  for (int a = 1; a <= j; ++a) {
    std::vector<Term> terms{{m.first_peak + a - 1, 1.0}};
    if (phase1) {
      terms.push_back({m.lp.add_variable(fmt::format("violation[{}]", a), 0.0, lp::kInfinity, 1.0),
                       -1.0});
    }
    m.lp.add_row(fmt::format("limit[{}]", a), std::move(terms), RowSense::less_equal,
                 econ.capacity_limit);
  }
  std::vector<Term> convexity;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    convexity.push_back({m.first_lambda + static_cast<int>(k), 1.0});
  }
  m.convexity_row = m.lp.add_row("convexity", std::move(convexity), RowSense::equal, 1.0);
  if (!phase1) m.lp.set_objective_offset(present_expansion_cost(j, econ));
  return m;
}

// Stored basis for a smaller pool, padded with the new proposals at zero.
const lp::Basis* aligned_basis(WarmBasis& stored, const MasterLayout& m, std::size_t pool_size) {
  if (stored.basis.empty() || stored.proposals > pool_size) return nullptr;
  const auto extra = static_cast<long>(pool_size - stored.proposals);
  const long at = m.first_lambda + static_cast<long>(stored.proposals);
  stored.basis.insert(stored.basis.begin() + at, static_cast<std::size_t>(extra),
                      lp::BasisStatus::at_lower);
  stored.proposals = pool_size;
  return &stored.basis;
}

lp::LpSolution solve_layout(const MasterLayout& m, std::size_t pool_size, WarmBasis* warm) {
  const lp::Basis* start = warm ? aligned_basis(*warm, m, pool_size) : nullptr;
  auto sol = lp::solve_lp(m.lp, {}, start);
  if (warm) {
    warm->basis = sol.basis;
    warm->proposals = pool_size;
  }
  return sol;
}

WarmBasis* slot(std::vector<WarmBasis>* cache, int j) {
  if (!cache) return nullptr;
  if (cache->size() <= static_cast<std::size_t>(j)) cache->resize(static_cast<std::size_t>(j) + 1);
  return &(*cache)[static_cast<std::size_t>(j)];
}

}  // namespace

lp::LinearProgram build_master(std::span<const Proposal> pool, int j,
                               const PlanningProblem& problem) {
  return build_layout(pool, j, problem, false).lp;
}

std::optional<MasterSolution> solve_master_at(std::span<const Proposal> pool, int j,
                                              const PlanningProblem& problem,
                                              MasterWarmStart* warm) {
  const auto m = build_layout(pool, j, problem, false);
  const auto sol = solve_layout(m, pool.size(), slot(warm ? &warm->optimal : nullptr, j));
  if (sol.status == lp::SolveStatus::infeasible) return std::nullopt;
  if (!sol.optimal()) throw lp::SolverFailure("master problem is unbounded");

  MasterSolution out;
  out.delta = j;
  out.objective = sol.objective;
  out.lambda.assign(sol.primal.begin() + m.first_lambda,
                    sol.primal.begin() + m.first_lambda + static_cast<long>(pool.size()));
  out.peaks.assign(sol.primal.begin() + m.first_peak,
                   sol.primal.begin() + m.first_peak + problem.grid.years());
  out.coupling_duals.assign(sol.dual.begin() + m.first_coupling_row,
                            sol.dual.begin() + m.first_coupling_row + problem.grid.size());
  out.convexity_dual = -sol.dual[static_cast<std::size_t>(m.convexity_row)];
  return out;
}

int first_rise_sweep(int horizon, const std::function<std::optional<double>(int)>& evaluate) {
  auto prev = evaluate(0);
  if (!prev) throw std::logic_error("MP(0) is infeasible; it has no capacity limit rows");
  for (int j = 1; j <= horizon; ++j) {
    const auto cur = evaluate(j);
    if (!cur) return j - 1;
    if (*cur > *prev + kSweepTolerance * std::max(1.0, std::abs(*prev))) return j - 1;
    prev = cur;
  }
  return horizon;
}

MasterSolution solve_master(std::span<const Proposal> pool, const PlanningProblem& problem,
                            MasterWarmStart* warm) {
  const int A = problem.grid.years();
  std::vector<std::optional<MasterSolution>> cache(static_cast<std::size_t>(A) + 1);
  std::vector<double> visited(static_cast<std::size_t>(A) + 1,
                              std::numeric_limits<double>::quiet_NaN());
  const int best = first_rise_sweep(A, [&](int j) -> std::optional<double> {
    cache[static_cast<std::size_t>(j)] = solve_master_at(pool, j, problem, warm);
    if (!cache[static_cast<std::size_t>(j)]) return std::nullopt;
    visited[static_cast<std::size_t>(j)] = cache[static_cast<std::size_t>(j)]->objective;
    return cache[static_cast<std::size_t>(j)]->objective;
  });
  MasterSolution out = std::move(*cache[static_cast<std::size_t>(best)]);
  out.visited = std::move(visited);
  return out;
}

namespace detail {

FeasibilityMaster solve_feasibility_master(std::span<const Proposal> pool, int j,
                                           const PlanningProblem& problem,
                                           MasterWarmStart* warm) {
  const auto m = build_layout(pool, j, problem, true);
  const auto sol = solve_layout(m, pool.size(), slot(warm ? &warm->phase1 : nullptr, j));
  if (!sol.optimal()) throw lp::SolverFailure("phase-1 master did not solve to optimality");
  FeasibilityMaster out;
  out.violation = sol.objective;
  out.coupling_duals.assign(sol.dual.begin() + m.first_coupling_row,
                            sol.dual.begin() + m.first_coupling_row + problem.grid.size());
  out.convexity_dual = -sol.dual[static_cast<std::size_t>(m.convexity_row)];
  return out;
}

}  // namespace detail
}  // namespace nwa::dw
