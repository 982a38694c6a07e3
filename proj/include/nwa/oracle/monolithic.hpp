#pragma once

#include <span>
#include <stdexcept>
#include <utility>

#include "nwa/dw/decomposition.hpp"
#include "nwa/dw/problem.hpp"
#include "nwa/lp/linear_program.hpp"

namespace nwa::oracle {

/// Thrown when a scenario is too large for the direct LP.
class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr long kDefaultMaxVariables = 1'000'000;

/// Variable layout of the monolithic LP: every block's joint variables in
/// block order, then one peak variable per year.
struct MonolithicLayout {
  std::vector<int> block_offset;
  int first_peak = 0;
};

/// Full planning LP with expansion fixed at year j.
lp::LinearProgram build_monolithic(const PlanningProblem& problem, int j,
                                   MonolithicLayout* layout = nullptr);

/// Solves the full LP for every j and keeps the cheapest (ties go to the
/// later year). Throws SizeError above `max_variables` per LP.
Plan solve_monolithic(const PlanningProblem& problem,
                      long max_variables = kDefaultMaxVariables);

/// MP(j) over the pool for every j; smallest objective wins, ties go to the
/// larger j. Returns the winning j and its objective.
std::pair<int, double> exhaustive_master(std::span<const dw::Proposal> pool,
                                         const PlanningProblem& problem);

}  // namespace nwa::oracle
