#include "nwa/der/der_block.hpp"

#include <cmath>

#include <fmt/format.h>

#include "nwa/core/errors.hpp"

namespace nwa::der {

void DerBlock::validate(const TimeGrid& grid) const {
  if (investment_cost.size() != investment_vars.size()) {
    throw ShapeError(fmt::format("{}: investment cost has {} entries for {} variables", name,
                                 investment_cost.size(), investment_vars.size()));
  }
  if (load_map.size() != static_cast<std::size_t>(grid.size())) {
    throw ShapeError(fmt::format("{}: load map covers {} cells, grid has {}", name,
                                 load_map.size(), grid.size()));
  }
  auto check_var = [&](const BlockVariable& v) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
      throw ValidationError(fmt::format("{}: variable {} has crossed bounds", name, v.name));
    }
  };
  for (const auto& v : investment_vars) check_var(v);
  for (const auto& v : operating_vars) check_var(v);
  for (const auto& row : constraints) {
    for (const auto& t : row.terms) {
      if (t.column < 0 || t.column >= variable_count() || !std::isfinite(t.coefficient)) {
        throw ShapeError(fmt::format("{}: row {} has a bad term", name, row.name));
      }
    }
  }
  for (const auto& cell : load_map) {
    for (const auto& t : cell) {
      if (t.column < 0 || t.column >= operating_count()) {
        throw ShapeError(fmt::format("{}: load map references operating variable {}", name,
                                     t.column));
      }
    }
  }
}

LoadSeries der_load(const DerBlock& block, std::span<const double> operating_solution,
                    const TimeGrid& grid) {
  if (operating_solution.size() != block.operating_vars.size()) {
    throw ShapeError(fmt::format("{}: operating solution has {} values, expected {}", block.name,
                                 operating_solution.size(), block.operating_vars.size()));
  }
  if (block.load_map.size() != static_cast<std::size_t>(grid.size())) {
    throw ShapeError(fmt::format("{}: load map does not match the grid", block.name));
  }
  auto out = LoadSeries::zeros(grid);
  auto values = out.values();
  for (std::size_t g = 0; g < block.load_map.size(); ++g) {
    double v = 0.0;
    for (const auto& t : block.load_map[g]) {
      v += t.coefficient * operating_solution[static_cast<std::size_t>(t.column)];
    }
    values[g] = v;
  }
  return out;
}

Money der_investment_cost(const DerBlock& block, std::span<const double> investment_solution) {
  if (investment_solution.size() != block.investment_cost.size()) {
    throw ShapeError(fmt::format("{}: investment solution has {} values, expected {}",
                                 block.name, investment_solution.size(),
                                 block.investment_cost.size()));
  }
  Money total = 0.0;
  for (std::size_t k = 0; k < investment_solution.size(); ++k) {
    total += block.investment_cost[k] * investment_solution[k];
  }
  return total;
}

std::vector<double> operating_cost_vector(const DerBlock& block,
                                          std::span<const double> cell_weights) {
  if (cell_weights.size() != block.load_map.size()) {
    throw ShapeError(fmt::format("{}: {} cell weights for {} cells", block.name,
                                 cell_weights.size(), block.load_map.size()));
  }
  std::vector<double> cost(block.operating_vars.size(), 0.0);
  for (std::size_t g = 0; g < block.load_map.size(); ++g) {
    for (const auto& t : block.load_map[g]) {
      cost[static_cast<std::size_t>(t.column)] += cell_weights[g] * t.coefficient;
    }
  }
  return cost;
}

}  // namespace nwa::der
