#include "nwa/app/profile.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "nwa/app/scenario.hpp"
#include "nwa/core/errors.hpp"

namespace nwa::app {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T>
bool parse_whole(std::string_view s, T& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && end == s.data() + s.size() && !s.empty();
}

std::string rows_text(std::span<const std::size_t> rows) {
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) out += i + 1 == rows.size() ? " or " : ", ";
    out += std::to_string(rows[i]);
  }
  return out;
}

}  // namespace

std::vector<double> load_series_csv(const std::filesystem::path& path,
                                    std::span<const std::size_t> accepted_rows,
                                    std::string_view value_column) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("{}: cannot open for reading", path.string()));
  const std::string where = path.string();

  std::string line;
  int line_no = 0;
  bool have_header = false;
  bool indexed = false;
  std::vector<double> values;
  long long expected_index = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (!have_header) {
      if (cells.size() != 2) {
        throw ValidationError(fmt::format("{}:{}: header must have 2 columns, found {}", where,
                                          line_no, cells.size()));
      }
      if (cells[0] == "interval_index") {
        indexed = true;
      } else if (cells[0] != "timestamp") {
        throw ValidationError(fmt::format(
            "{}:{}: first column must be interval_index or timestamp, found '{}'", where, line_no,
            cells[0]));
      }
      if (cells[1] != value_column) {
        throw ValidationError(fmt::format("{}:{}: second column must be '{}', found '{}'", where,
                                          line_no, value_column, cells[1]));
      }
      have_header = true;
      continue;
    }
    const std::size_t row = values.size() + 1;
    if (cells.size() != 2) {
      throw ValidationError(fmt::format("{}:{}: row {} has {} cells, expected 2", where, line_no,
                                        row, cells.size()));
    }
    if (indexed) {
      long long idx = 0;
      if (!parse_whole(cells[0], idx)) {
        throw ValidationError(fmt::format("{}:{}: row {}: interval_index '{}' is not an integer",
                                          where, line_no, row, cells[0]));
      }
      if (values.empty()) expected_index = idx;
      if (idx != expected_index || (values.empty() && idx != 0 && idx != 1)) {
        throw ValidationError(fmt::format("{}:{}: row {}: interval_index {} out of sequence",
                                          where, line_no, row, idx));
      }
      ++expected_index;
    }
    double v = 0.0;
    if (!parse_whole(cells[1], v)) {
      throw ValidationError(fmt::format("{}:{}: row {}: '{}' is not a number", where, line_no,
                                        row, cells[1]));
    }
    if (!std::isfinite(v)) {
      throw ValidationError(
          fmt::format("{}:{}: row {}: value must be finite, found {}", where, line_no, row, v));
    }
    values.push_back(v);
  }
  if (in.bad()) throw IoError(fmt::format("{}: read error", where));
  if (!have_header) throw ValidationError(fmt::format("{}: empty file, header missing", where));
  if (std::find(accepted_rows.begin(), accepted_rows.end(), values.size()) ==
      accepted_rows.end()) {
    throw ValidationError(fmt::format("{}: {} data rows, expected {}", where, values.size(),
                                      rows_text(accepted_rows)));
  }
  return values;
}

YearProfile load_profile_csv(const std::filesystem::path& path, std::size_t expected_rows) {
  const std::size_t rows[] = {expected_rows};
  return load_series_csv(path, rows, "mw");
}

void write_series_csv(const std::filesystem::path& path, std::span<const double> values,
                      std::string_view value_column) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("{}: cannot open for writing", path.string()));
  out << "interval_index," << value_column << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) out << fmt::format("{},{}\n", i, values[i]);
  if (!out.flush()) throw IoError(fmt::format("{}: write failed", path.string()));
}

YearProfile synth_profile(double peak_mw, const SynthShape& shape) {
  if (!(peak_mw > 0.0) || !std::isfinite(peak_mw)) {
    throw ValidationError("synth.peak must be > 0");
  }
  if (!(shape.min_load_factor <= shape.max_load_factor)) {
    throw ValidationError("synth load factor band is empty");
  }
  constexpr int kHours = 8760;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::mt19937_64 rng(shape.seed);
  std::normal_distribution<double> noise(0.0, shape.noise);

  YearProfile p(kHours);
  for (int h = 0; h < kHours; ++h) {
    const int day = h / 24;
    const double hour = h % 24;
    const double season = std::cos(two_pi * (day - shape.peak_day) / 365.0);
    const double daily = std::cos(two_pi * (hour - shape.peak_hour) / 24.0);
    // weekday occupancy: campus load drops on weekends
    const double weekend = (day % 7 == 5 || day % 7 == 6) ? 0.9 : 1.0;
    const double n = shape.noise > 0.0 ? noise(rng) : 0.0;
    p[static_cast<std::size_t>(h)] =
        std::max(0.05, weekend * (1.0 + shape.seasonal_amplitude * season +
                                  shape.daily_amplitude * daily) + n);
  }
  auto top = std::max_element(p.begin(), p.end());
  const double scale = peak_mw / *top;
  for (auto& v : p) v = std::min(v * scale, peak_mw);
  *top = peak_mw;

  const double lf = load_factor(p);
  if (lf < shape.min_load_factor || lf > shape.max_load_factor) {
    throw ValidationError(fmt::format("synthetic load factor {:.4f} outside [{}, {}]", lf,
                                      shape.min_load_factor, shape.max_load_factor));
  }
  return p;
}

double load_factor(std::span<const double> profile) {
  if (profile.empty()) return 0.0;
  const double peak = *std::max_element(profile.begin(), profile.end());
  const double mean = std::accumulate(profile.begin(), profile.end(), 0.0) /
                      static_cast<double>(profile.size());
  return peak > 0.0 ? mean / peak : 0.0;
}

YearProfile peak_day_blocks(std::span<const double> hourly, int block_hours) {
  if (hourly.size() % 24 != 0 || hourly.empty()) {
    throw ShapeError(fmt::format("hourly profile of {} values is not whole days", hourly.size()));
  }
  if (block_hours < 1 || 24 % block_hours != 0) {
    throw ValidationError("block_hours must divide 24");
  }
  const auto top = std::max_element(hourly.begin(), hourly.end()) - hourly.begin();
  const auto day_start = static_cast<std::size_t>(top / 24 * 24);
  YearProfile out;
  for (int b = 0; b < 24 / block_hours; ++b) {
    auto first = hourly.begin() + static_cast<std::ptrdiff_t>(day_start) + b * block_hours;
    out.push_back(*std::max_element(first, first + block_hours));
  }
  return out;
}

}  // namespace nwa::app
