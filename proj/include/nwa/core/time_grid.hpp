#pragma once

#include <span>
#include <vector>

namespace nwa {

inline constexpr double kHoursPerYear = 8760.0;

/// Planning horizon of `years` years, each split into the same sequence of
/// operating intervals. Interval t stands for `weight(t)` real intervals of
/// `step_hours()` hours, so aggregated (representative-period) grids still
/// cover 8760 h per year.
class TimeGrid {
 public:
  TimeGrid(int years, int intervals_per_year, double step_hours,
           std::vector<double> interval_weight);

  /// Equal weights chosen so the year covers exactly 8760 h.
  static TimeGrid uniform(int years, int intervals_per_year, double step_hours = 1.0);

  int years() const { return years_; }
  int intervals_per_year() const { return intervals_; }
  double step_hours() const { return step_hours_; }
  double weight(int t) const { return weight_[static_cast<std::size_t>(t)]; }
  std::span<const double> weights() const { return weight_; }

  /// Number of (year, interval) cells.
  int size() const { return years_ * intervals_; }

  /// Flat index of interval t (0-based) in year a (1-based).
  int index(int year, int t) const { return (year - 1) * intervals_ + t; }

 private:
  int years_;
  int intervals_;
  double step_hours_;
  std::vector<double> weight_;
};

}  // namespace nwa
