#include "nwa/core/load.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "nwa/core/errors.hpp"

namespace nwa {

LoadSeries::LoadSeries(int years, int intervals_per_year, std::vector<Megawatts> values)
    : years_(years), intervals_(intervals_per_year), values_(std::move(values)) {
  if (years_ < 0 || intervals_ < 0 ||
      values_.size() != static_cast<std::size_t>(years_) * static_cast<std::size_t>(intervals_)) {
    throw ShapeError(fmt::format("load series of {} values does not fit {} x {}", values_.size(),
                                 years_, intervals_));
  }
}

LoadSeries LoadSeries::zeros(const TimeGrid& grid) {
  return {grid.years(), grid.intervals_per_year(),
          std::vector<Megawatts>(static_cast<std::size_t>(grid.size()), 0.0)};
}

std::span<const Megawatts> LoadSeries::year(int a) const {
  return std::span<const Megawatts>(values_).subspan(flat(a, 0),
                                                      static_cast<std::size_t>(intervals_));
}

LoadSeries& LoadSeries::operator+=(const LoadSeries& other) {
  if (other.years_ != years_ || other.intervals_ != intervals_) {
    throw ShapeError("cannot add load series of different shapes");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

LoadSeries& LoadSeries::operator*=(double k) {
  for (auto& v : values_) v *= k;
  return *this;
}

LoadSeries grow_load(std::span<const Megawatts> base_profile, double growth_rate,
                     const TimeGrid& grid) {
  if (base_profile.size() != static_cast<std::size_t>(grid.intervals_per_year())) {
    throw ShapeError(fmt::format("base profile has {} intervals, grid expects {}",
                                 base_profile.size(), grid.intervals_per_year()));
  }
  if (!(growth_rate > -1.0)) throw ValidationError("growth_rate must be > -1");
  auto out = LoadSeries::zeros(grid);
  for (int a = 1; a <= grid.years(); ++a) {
    const double factor = std::pow(1.0 + growth_rate, a);
    for (int t = 0; t < grid.intervals_per_year(); ++t) {
      out.at(a, t) = base_profile[static_cast<std::size_t>(t)] * factor;
    }
  }
  return out;
}

std::vector<Megawatts> yearly_peak(const LoadSeries& load) {
  if (load.intervals_per_year() < 1) throw ShapeError("yearly_peak needs a non-empty grid");
  std::vector<Megawatts> peaks;
  peaks.reserve(static_cast<std::size_t>(load.years()));
  for (int a = 1; a <= load.years(); ++a) {
    auto year = load.year(a);
    peaks.push_back(*std::max_element(year.begin(), year.end()));
  }
  return peaks;
}

}  // namespace nwa
