#pragma once

#include <span>
#include <vector>

#include "nwa/core/time_grid.hpp"

namespace nwa {

using Megawatts = double;

/// One year of load, one value per grid interval.
using YearProfile = std::vector<Megawatts>;

/// Load in MW for every (year, interval) cell of a grid. Years are 1-based.
class LoadSeries {
 public:
  LoadSeries() = default;
  LoadSeries(int years, int intervals_per_year, std::vector<Megawatts> values);

  static LoadSeries zeros(const TimeGrid& grid);

  int years() const { return years_; }
  int intervals_per_year() const { return intervals_; }
  std::size_t size() const { return values_.size(); }

  Megawatts at(int year, int t) const { return values_[flat(year, t)]; }
  Megawatts& at(int year, int t) { return values_[flat(year, t)]; }

  std::span<const Megawatts> values() const { return values_; }
  std::span<Megawatts> values() { return values_; }
  std::span<const Megawatts> year(int a) const;

  LoadSeries& operator+=(const LoadSeries& other);
  LoadSeries& operator*=(double k);

  bool matches(const TimeGrid& grid) const {
    return years_ == grid.years() && intervals_ == grid.intervals_per_year();
  }

 private:
  std::size_t flat(int year, int t) const {
    return static_cast<std::size_t>((year - 1) * intervals_ + t);
  }

  int years_ = 0;
  int intervals_ = 0;
  std::vector<Megawatts> values_;
};

/// base(t) * (1+g)^a for every year a of the grid.
LoadSeries grow_load(std::span<const Megawatts> base_profile, double growth_rate,
                     const TimeGrid& grid);

/// Per-year maximum over intervals, index 0 holds year 1.
std::vector<Megawatts> yearly_peak(const LoadSeries& load);

}  // namespace nwa
