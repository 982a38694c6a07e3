#pragma once

#include <span>
#include <string>
#include <vector>

#include "nwa/core/economics.hpp"
#include "nwa/core/load.hpp"
#include "nwa/core/time_grid.hpp"
#include "nwa/lp/linear_program.hpp"

namespace nwa::der {

struct BlockVariable {
  std::string name;
  double lower = 0.0;
  double upper = lp::kInfinity;
};

/// One distributed resource compiled to linear form.
///
/// Variables are indexed jointly: investment variables occupy
/// [0, investment_vars.size()), operating variables follow. Constraint rows
/// use that joint indexing. `load_map[g]` lists the (operating variable,
/// coefficient) pairs whose sum is the resource's MW contribution at flat grid
/// cell g; operating indices there are relative to the operating block.
struct DerBlock {
  std::string name;
  std::string capacity_unit;
  std::vector<BlockVariable> investment_vars;
  std::vector<BlockVariable> operating_vars;
  std::vector<lp::Row> constraints;
  std::vector<double> investment_cost;
  std::vector<std::vector<lp::Term>> load_map;

  int investment_count() const { return static_cast<int>(investment_vars.size()); }
  int operating_count() const { return static_cast<int>(operating_vars.size()); }
  int variable_count() const { return investment_count() + operating_count(); }
  int operating_column(int k) const { return investment_count() + k; }

  /// Structural checks: index ranges, bounds, cost vector length.
  void validate(const TimeGrid& grid) const;
};

/// Applies the load map to an operating solution.
LoadSeries der_load(const DerBlock& block, std::span<const double> operating_solution,
                    const TimeGrid& grid);

Money der_investment_cost(const DerBlock& block, std::span<const double> investment_solution);

/// Present energy cost of the block's load, as a cost per operating variable:
/// coefficient_k = sum over cells g of energy_coef[g] * load_map[g][k].
std::vector<double> operating_cost_vector(const DerBlock& block,
                                          std::span<const double> cell_weights);

}  // namespace nwa::der
