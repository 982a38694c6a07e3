#include <algorithm>
#include <cmath>
#include <limits>

#include "feasibility_master.hpp"
#include "nwa/dw/decomposition.hpp"

namespace nwa::dw {
namespace {

// Farkas columns are priced in MW of limit violation, so an absolute
// threshold is enough.
constexpr double kFeasibilityTolerance = 1e-7;

double rc_threshold(const PlanningProblem& problem, double objective) {
  return problem.settings.rc_tolerance * std::max(1.0, std::abs(objective));
}

// Stability center of MP(j): the duals with the best Lagrangian bound seen
// so far. The dual objective is linear and does not depend on the pool, so
// it can be carried along with the duals.
struct Center {
  bool set = false;
  std::vector<double> pi;
  double mu = 0.0;
  double dual_objective = 0.0;
  double bound = -std::numeric_limits<double>::infinity();
};

struct Priced {
  bool added = false;
  double rc = 0.0;  // at the master duals, of the column added or the exact optimum
};

// Column generation state shared by the incumbent and its neighbors.
class Pricer {
 public:
  Pricer(const PlanningProblem& problem, std::vector<Proposal>& pool)
      : problem_(problem),
        pool_(pool),
        centers_(static_cast<std::size_t>(problem.grid.years()) + 1) {}

  MasterWarmStart& warm() { return warm_; }
  const Center& center(int j) const { return centers_[static_cast<std::size_t>(j)]; }

  // Prices MP(j) with smoothed duals when a center exists; falls back to the
  // master duals on a mispricing, so "nothing added" always means MP(j) is
  // priced out at its own duals.
  Priced price(int j, const MasterSolution& ms) {
    auto& c = centers_[static_cast<std::size_t>(j)];
    const double alpha = problem_.settings.smoothing;
    const double threshold = rc_threshold(problem_, ms.objective);
    if (c.set && alpha > 0.0) {
      std::vector<double> pi(ms.coupling_duals.size());
      for (std::size_t g = 0; g < pi.size(); ++g) {
        pi[g] = alpha * c.pi[g] + (1.0 - alpha) * ms.coupling_duals[g];
      }
      const double mu = alpha * c.mu + (1.0 - alpha) * ms.convexity_dual;
      const double dual_obj = alpha * c.dual_objective + (1.0 - alpha) * ms.objective;
      auto col = subproblems(pi);
      consider(c, pi, mu, dual_obj, dual_obj + reduced_cost(col, pi, mu, problem_.grid));
      const double rc = reduced_cost(col, ms.coupling_duals, ms.convexity_dual, problem_.grid);
      if (rc < -threshold) return add(std::move(col), rc);
    }
    auto col = subproblems(ms.coupling_duals);
    const double rc = reduced_cost(col, ms.coupling_duals, ms.convexity_dual, problem_.grid);
    consider(c, ms.coupling_duals, ms.convexity_dual, ms.objective, ms.objective + rc);
    if (rc < -threshold) return add(std::move(col), rc);
    return {false, rc};
  }

  // Prices a neighbor j of the incumbent value `incumbent`. Nothing to do
  // once a Lagrangian bound shows MP(j) cannot beat it. When MP(j) is
  // infeasible over the pool, prices with phase-1 duals instead. True if a
  // column was added.
  bool price_neighbor(int j, double incumbent) {
    if (center(j).bound >= incumbent - rc_threshold(problem_, incumbent)) return false;
    if (const auto ms = solve_master_at(pool_, j, problem_, &warm_)) return price(j, *ms).added;
    return price_phase1(detail::solve_feasibility_master(pool_, j, problem_, &warm_));
  }

  // Phase 1 over the horizon before any cost pricing: makes MP(j) feasible
  // for every j the resources allow, walking j upward. Limit rows are
  // nested, so the first j proven infeasible ends the walk. Without this the
  // sweep stalls on the last feasible year while later ones look infeasible
  // only for want of columns. Returns the number of columns added.
  int seed(int budget) {
    int added = 0;
    for (int j = 1; j <= problem_.grid.years(); ++j) {
      for (;;) {
        const auto fm = detail::solve_feasibility_master(pool_, j, problem_, &warm_);
        if (fm.violation <= kFeasibilityTolerance) break;
        if (added >= budget || !price_phase1(fm)) return added;
        ++added;
      }
    }
    return added;
  }

 private:
  Proposal subproblems(std::span<const double> pi) {
    return solve_subproblems(problem_.blocks, pi, problem_.economics, problem_.grid, true,
                             &blocks_warm_);
  }

  static void consider(Center& c, std::span<const double> pi, double mu, double dual_obj,
                       double bound) {
    if (c.set && bound <= c.bound) return;
    c.set = true;
    c.pi.assign(pi.begin(), pi.end());
    c.mu = mu;
    c.dual_objective = dual_obj;
    c.bound = bound;
  }

  // Cost-free pricing against phase-1 duals; true if a column was added.
  bool price_phase1(const detail::FeasibilityMaster& fm) {
    const auto& grid = problem_.grid;
    auto col = solve_subproblems(problem_.blocks, fm.coupling_duals, problem_.economics, grid,
                                 false, &blocks_warm_);
    if (price_of_load(col.load, fm.coupling_duals, grid) - fm.convexity_dual <
        -kFeasibilityTolerance) {
      add(std::move(col), 0.0);
      return true;
    }
    return false;
  }

  Priced add(Proposal col, double rc) {
    col.index = static_cast<int>(pool_.size());
    pool_.push_back(std::move(col));
    return {true, rc};
  }

  const PlanningProblem& problem_;
  std::vector<Proposal>& pool_;
  std::vector<Center> centers_;
  MasterWarmStart warm_;
  std::vector<lp::Basis> blocks_warm_;
};

}  // namespace

Plan run_dwda(const PlanningProblem& problem) {
  problem.validate();
  const auto& s = problem.settings;
  const int A = problem.grid.years();

  std::vector<Proposal> pool{do_nothing_proposal(problem)};
  Pricer pricer(problem, pool);
  pricer.seed(s.max_iterations);
  std::vector<IterationRecord> log;
  Termination termination = Termination::iteration_limit;
  MasterSolution master;
  int quiet_rounds = 0;
  int last_delta = -1;

  for (int it = 1; it <= s.max_iterations; ++it) {
    master = solve_master(pool, problem, &pricer.warm());
    const int pool_size = static_cast<int>(pool.size());
    const auto priced = pricer.price(master.delta, master);
    log.push_back({it, master.objective, priced.rc, master.delta, pool_size,
                   pricer.center(master.delta).bound});

    if (priced.added) {
      const bool progressed =
          log.size() < 2 || log[log.size() - 2].master_objective - master.objective >=
                                s.stagnation_tolerance * std::max(1.0, std::abs(master.objective));
      quiet_rounds = (progressed || master.delta != last_delta) ? 0 : quiet_rounds + 1;
      last_delta = master.delta;
      if (quiet_rounds >= s.stagnation_window) {
        termination = Termination::stagnation;
        break;
      }
      continue;
    }

    // MP(j*) is priced out. The sweep compared it against its neighbors, so
    // those must be priced out too before the choice of j* can be trusted.
    bool added = false;
    if (master.delta > 0) added |= pricer.price_neighbor(master.delta - 1, master.objective);
    if (master.delta < A) added |= pricer.price_neighbor(master.delta + 1, master.objective);
    quiet_rounds = 0;
    last_delta = master.delta;
    if (!added) {
      termination = Termination::reduced_cost;
      break;
    }
  }
  if (termination == Termination::iteration_limit) master = solve_master(pool, problem, &pricer.warm());

  Plan plan = reconstruct_plan(pool, master, problem);
  plan.iterations = std::move(log);
  plan.termination = termination;
  plan.converged = termination != Termination::iteration_limit;
  plan.bound_gap = std::max(0.0, master.objective - pricer.center(master.delta).bound) /
                   std::max(1.0, std::abs(master.objective));
  return plan;
}

Plan reconstruct_plan(std::span<const Proposal> pool, const MasterSolution& master,
                      const PlanningProblem& problem) {
  const auto& grid = problem.grid;
  const auto& econ = problem.economics;
  Plan plan;
  plan.engine = "dwda";
  plan.expansion_year = master.delta;
  plan.objective = master.objective;
  plan.year_objectives = master.visited;
  plan.net_load = problem.base_load;

  for (std::size_t b = 0; b < problem.blocks.size(); ++b) {
    const auto& block = problem.blocks[b];
    std::vector<double> x(static_cast<std::size_t>(block.variable_count()), 0.0);
    for (std::size_t k = 0; k < pool.size(); ++k) {
      const double l = master.lambda[k];
      if (l == 0.0) continue;
      const auto& sol = pool[k].solutions[b];
      for (std::size_t v = 0; v < x.size(); ++v) x[v] += l * sol[v];
    }
    DerResult r;
    r.name = block.name;
    r.capacity_unit = block.capacity_unit;
    const auto ni = static_cast<std::size_t>(block.investment_count());
    r.investment.assign(x.begin(), x.begin() + static_cast<long>(ni));
    r.operating.assign(x.begin() + static_cast<long>(ni), x.end());
    for (const auto& v : block.investment_vars) r.investment_names.push_back(v.name);
    for (double v : r.investment) r.capacity += v;
    r.load = der::der_load(block, r.operating, grid);
    r.investment_cost = der::der_investment_cost(block, r.investment);
    r.operating_cost = present_energy_cost(r.load, econ, grid);
    plan.net_load += r.load;
    plan.costs.nwa_investment += r.investment_cost;
    plan.costs.nwa_operation += r.operating_cost;
    plan.ders.push_back(std::move(r));
  }
  plan.peaks = yearly_peak(plan.net_load);
  plan.costs.demand_charge = present_demand_charge(plan.peaks, econ);
  plan.costs.expansion = present_expansion_cost(master.delta, econ);
  return plan;
}

}  // namespace nwa::dw
