#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "nwa/core/load.hpp"

namespace nwa::app {

/// Reads a two-column CSV with a header. The first column is interval_index
/// (consecutive integers) or timestamp (free text); the second is named
/// `value_column`. The row count must be one of `accepted_rows`.
std::vector<double> load_series_csv(const std::filesystem::path& path,
                                    std::span<const std::size_t> accepted_rows,
                                    std::string_view value_column);

/// One year of load in MW; `expected_rows` is 8760 for hourly grids or the
/// interval count of an aggregated grid.
YearProfile load_profile_csv(const std::filesystem::path& path, std::size_t expected_rows);

/// interval_index,<value_column> rows, shortest round-trip decimal form.
void write_series_csv(const std::filesystem::path& path, std::span<const double> values,
                      std::string_view value_column = "mw");

struct SynthShape {
  std::uint64_t seed = 2016;
  double seasonal_amplitude = 0.12;  // relative to the mean level
  double daily_amplitude = 0.18;
  double noise = 0.03;
  int peak_day = 196;                // 0-based day of year with the warmest weather
  double peak_hour = 15.0;
  double min_load_factor = 0.55;
  double max_load_factor = 0.85;
};

/// 8760 hourly values with daily and seasonal cosine structure plus seeded
/// noise, scaled so the maximum is exactly `peak_mw`. Throws ValidationError
/// if peak_mw <= 0 or the load factor leaves the configured band.
YearProfile synth_profile(double peak_mw, const SynthShape& shape = {});

/// mean / max
double load_factor(std::span<const double> profile);

/// The day holding the annual maximum of an hourly profile, cut into blocks
/// of `block_hours` and reduced by max, so the annual peak survives.
YearProfile peak_day_blocks(std::span<const double> hourly, int block_hours);

}  // namespace nwa::app
