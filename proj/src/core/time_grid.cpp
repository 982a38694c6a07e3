#include "nwa/core/time_grid.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "nwa/core/errors.hpp"

namespace nwa {

TimeGrid::TimeGrid(int years, int intervals_per_year, double step_hours,
                   std::vector<double> interval_weight)
    : years_(years),
      intervals_(intervals_per_year),
      step_hours_(step_hours),
      weight_(std::move(interval_weight)) {
  if (years_ < 1) throw ValidationError("grid.years must be >= 1");
  if (intervals_ < 1) throw ValidationError("grid.intervals_per_year must be >= 1");
  if (!(step_hours_ > 0.0) || !std::isfinite(step_hours_)) {
    throw ValidationError("grid.step_hours must be > 0");
  }
  if (weight_.size() != static_cast<std::size_t>(intervals_)) {
    throw ShapeError(fmt::format("grid.weights has {} entries, expected {}", weight_.size(),
                                 intervals_));
  }
  for (double w : weight_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ValidationError("grid.weights must be > 0");
  }
  const double hours = std::accumulate(weight_.begin(), weight_.end(), 0.0) * step_hours_;
  if (std::abs(hours - kHoursPerYear) > 1e-6) {
    throw ValidationError(
        fmt::format("grid.weights cover {} h per year, expected {}", hours, kHoursPerYear));
  }
}

TimeGrid TimeGrid::uniform(int years, int intervals_per_year, double step_hours) {
  if (intervals_per_year < 1 || !(step_hours > 0.0)) {
    throw ValidationError("grid.intervals_per_year and grid.step_hours must be positive");
  }
  const double w = kHoursPerYear / (intervals_per_year * step_hours);
  return {years, intervals_per_year, step_hours,
          std::vector<double>(static_cast<std::size_t>(intervals_per_year), w)};
}

}  // namespace nwa
