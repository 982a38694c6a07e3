#include "nwa/core/economics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "nwa/core/errors.hpp"

namespace nwa {

std::vector<std::string> Economics::problems() const {
  std::vector<std::string> out;
  if (!(discount_rate > 0.0) || !std::isfinite(discount_rate)) {
    out.emplace_back("economics.discount_rate must be > 0");
  }
  if (!(expansion_cost >= 0.0) || !std::isfinite(expansion_cost)) {
    out.emplace_back("economics.expansion_cost must be >= 0");
  }
  if (!(capacity_limit > 0.0) || !std::isfinite(capacity_limit)) {
    out.emplace_back("economics.capacity_limit must be > 0");
  }
  if (!(demand_charge_rate >= 0.0) || !std::isfinite(demand_charge_rate)) {
    out.emplace_back("economics.demand_charge_rate must be >= 0");
  }
  for (double p : energy_price) {
    if (!std::isfinite(p)) {
      out.emplace_back("economics.energy_price must be finite");
      break;
    }
  }
  return out;
}

void Economics::validate() const {
  if (auto p = problems(); !p.empty()) throw ValidationError(p.front());
}

double Economics::price(const TimeGrid& grid, int year, int t) const {
  const auto n = energy_price.size();
  if (n == static_cast<std::size_t>(grid.intervals_per_year())) {
    return energy_price[static_cast<std::size_t>(t)];
  }
  if (n == static_cast<std::size_t>(grid.size())) {
    return energy_price[static_cast<std::size_t>(grid.index(year, t))];
  }
  throw ShapeError(fmt::format("economics.energy_price has {} values, grid expects {} or {}", n,
                               grid.intervals_per_year(), grid.size()));
}

double discount_factor(double rate, int year) { return std::pow(1.0 + rate, -year); }

int capex_year(std::span<const Megawatts> peaks, Megawatts limit) {
  int j = 0;
  for (Megawatts p : peaks) {
    if (p > limit) break;
    ++j;
  }
  return j;
}

Money present_expansion_cost(int delta, const Economics& econ) {
  return econ.expansion_cost * discount_factor(econ.discount_rate, delta);
}

std::vector<double> energy_cost_coefficients(const Economics& econ, const TimeGrid& grid) {
  std::vector<double> coef(static_cast<std::size_t>(grid.size()));
  for (int a = 1; a <= grid.years(); ++a) {
    const double df = discount_factor(econ.discount_rate, a);
    for (int t = 0; t < grid.intervals_per_year(); ++t) {
      coef[static_cast<std::size_t>(grid.index(a, t))] =
          df * econ.price(grid, a, t) * grid.step_hours() * grid.weight(t);
    }
  }
  return coef;
}

Money present_energy_cost(const LoadSeries& load, const Economics& econ, const TimeGrid& grid) {
  if (!load.matches(grid)) throw ShapeError("load series does not match the grid");
  const auto coef = energy_cost_coefficients(econ, grid);
  Money total = 0.0;
  auto values = load.values();
  for (std::size_t i = 0; i < coef.size(); ++i) total += coef[i] * values[i];
  return total;
}

Money present_demand_charge(std::span<const Megawatts> peaks, const Economics& econ) {
  Money total = 0.0;
  for (std::size_t a = 0; a < peaks.size(); ++a) {
    total += discount_factor(econ.discount_rate, static_cast<int>(a) + 1) *
             econ.demand_charge_rate * peaks[a];
  }
  return total;
}

}  // namespace nwa
