#pragma once

#include <span>
#include <string>
#include <vector>

#include "nwa/core/load.hpp"
#include "nwa/core/time_grid.hpp"

namespace nwa {

using Money = double;

struct Economics {
  double discount_rate = 0.07;          // per year
  Money expansion_cost = 0.0;           // I, paid in the expansion year
  Megawatts capacity_limit = 0.0;       // pre-expansion limit
  double demand_charge_rate = 0.0;      // $/MW-year on the yearly peak
  /// $/MWh. Either one value per interval of a year (repeated every year) or
  /// one value per (year, interval) cell.
  std::vector<double> energy_price;

  /// Every problem found, one message per field; empty when valid.
  std::vector<std::string> problems() const;
  /// Throws ValidationError naming the first offending field.
  void validate() const;

  /// Price at interval t of year a (1-based); throws ShapeError if the
  /// series length fits neither layout.
  double price(const TimeGrid& grid, int year, int t) const;
};

/// (1+rate)^-year
double discount_factor(double rate, int year);

/// Largest j in 0..peaks.size() with peaks[a] <= limit for every year a <= j.
int capex_year(std::span<const Megawatts> peaks, Megawatts limit);

/// I / (1+rate)^delta
Money present_expansion_cost(int delta, const Economics& econ);

/// Discounted multiplier that turns MW at cell (a,t) into present dollars of
/// energy: (1+rate)^-a * price(a,t) * step_hours * weight(t). Flat indexed.
std::vector<double> energy_cost_coefficients(const Economics& econ, const TimeGrid& grid);

Money present_energy_cost(const LoadSeries& load, const Economics& econ, const TimeGrid& grid);

/// Sum over years of (1+rate)^-a * demand_charge_rate * peak_a.
Money present_demand_charge(std::span<const Megawatts> peaks, const Economics& econ);

}  // namespace nwa
