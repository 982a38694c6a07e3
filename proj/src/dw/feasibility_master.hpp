#pragma once

#include <span>
#include <vector>

#include "nwa/dw/decomposition.hpp"

namespace nwa::dw::detail {

/// Phase-1 master for MP(j): minimize total capacity-limit violation over
/// the pool. Its duals drive cost-free pricing that looks for columns which
/// make MP(j) feasible.
struct FeasibilityMaster {
  double violation = 0.0;
  std::vector<double> coupling_duals;
  double convexity_dual = 0.0;
};

FeasibilityMaster solve_feasibility_master(std::span<const Proposal> pool, int j,
                                           const PlanningProblem& problem,
                                           MasterWarmStart* warm = nullptr);

}  // namespace nwa::dw::detail
