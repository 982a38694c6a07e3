#include "nwa/der/builders.hpp"

#include <cmath>

#include <fmt/format.h>

#include "nwa/core/errors.hpp"

namespace nwa::der {
namespace {

using lp::RowSense;
using lp::Term;

std::string cell_name(std::string_view stem, int year, int t) {
  return fmt::format("{}[{},{}]", stem, year, t);
}

bool finite_nonnegative(double v) { return std::isfinite(v) && v >= 0.0; }

// Per-cell value from a series that is either one year long or spans the grid.
double per_cell(std::span<const double> series, const TimeGrid& grid, int year, int t,
                std::string_view what) {
  if (series.size() == static_cast<std::size_t>(grid.intervals_per_year())) {
    return series[static_cast<std::size_t>(t)];
  }
  if (series.size() == static_cast<std::size_t>(grid.size())) {
    return series[static_cast<std::size_t>(grid.index(year, t))];
  }
  throw ShapeError(fmt::format("{} has {} values, grid expects {} or {}", what, series.size(),
                               grid.intervals_per_year(), grid.size()));
}

DerBlock empty_block(std::string name, std::string unit, const TimeGrid& grid) {
  DerBlock b;
  b.name = std::move(name);
  b.capacity_unit = std::move(unit);
  b.load_map.resize(static_cast<std::size_t>(grid.size()));
  return b;
}

}  // namespace

void EeParams::validate() const {
  if (segment_sizes.empty()) throw ValidationError("der.ee.segments must not be empty");
  if (segment_sizes.size() != segment_marginal_costs.size()) {
    throw ValidationError("der.ee.segments: sizes and costs differ in length");
  }
  for (std::size_t b = 0; b < segment_sizes.size(); ++b) {
    if (!finite_nonnegative(segment_sizes[b])) {
      throw ValidationError(fmt::format("der.ee.segments[{}].size must be >= 0", b));
    }
    if (!finite_nonnegative(segment_marginal_costs[b])) {
      throw ValidationError(fmt::format("der.ee.segments[{}].cost must be >= 0", b));
    }
    if (b > 0 && segment_marginal_costs[b] < segment_marginal_costs[b - 1]) {
      throw ValidationError("der.ee.segments: marginal costs must be nondecreasing");
    }
  }
}

void PvParams::validate() const {
  if (!finite_nonnegative(capacity_limit)) {
    throw ValidationError("der.pv.capacity_limit must be finite and >= 0");
  }
  if (!finite_nonnegative(unit_cost)) throw ValidationError("der.pv.unit_cost must be >= 0");
  if (capacity_factor.empty()) throw ValidationError("der.pv.capacity_factor is empty");
  for (double a : capacity_factor) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw ValidationError("der.pv.capacity_factor values must lie in [0, 1]");
    }
  }
}

void DrParams::validate() const {
  if (!finite_nonnegative(capacity_limit)) {
    throw ValidationError("der.dr.capacity_limit must be finite and >= 0");
  }
  if (!finite_nonnegative(unit_cost)) throw ValidationError("der.dr.unit_cost must be >= 0");
  if (!(rebound_factor >= 1.0) || !std::isfinite(rebound_factor)) {
    throw ValidationError("der.dr.rebound_factor must be >= 1");
  }
}

void EsParams::validate() const {
  if (!finite_nonnegative(capacity_limit)) {
    throw ValidationError("der.es.capacity_limit must be finite and >= 0");
  }
  if (!finite_nonnegative(unit_cost)) throw ValidationError("der.es.unit_cost must be >= 0");
  if (!(charge_efficiency > 0.0 && charge_efficiency <= 1.0)) {
    throw ValidationError("der.es.charge_efficiency must lie in (0, 1]");
  }
  if (!(discharge_efficiency > 0.0 && discharge_efficiency <= 1.0)) {
    throw ValidationError("der.es.discharge_efficiency must lie in (0, 1]");
  }
  if (!finite_nonnegative(degradation)) throw ValidationError("der.es.degradation must be >= 0");
  if (!(energy_power_ratio > 0.0) || !std::isfinite(energy_power_ratio)) {
    throw ValidationError("der.es.energy_power_ratio must be > 0");
  }
}

DerBlock build_ee_block(const EeParams& p, std::span<const double> base_profile,
                        const TimeGrid& grid) {
  p.validate();
  if (base_profile.size() != static_cast<std::size_t>(grid.intervals_per_year())) {
    throw ShapeError(fmt::format("EE base profile has {} intervals, grid expects {}",
                                 base_profile.size(), grid.intervals_per_year()));
  }
  auto b = empty_block("ee", "fraction", grid);
  const int segments = static_cast<int>(p.segment_sizes.size());
  for (int s = 0; s < segments; ++s) {
    b.investment_vars.push_back({fmt::format("ee.eps[{}]", s), 0.0, p.segment_sizes[s]});
    b.investment_cost.push_back(p.segment_marginal_costs[s]);
  }
  for (int a = 1; a <= grid.years(); ++a) {
    for (int t = 0; t < grid.intervals_per_year(); ++t) {
      const int k = b.operating_count();
      b.operating_vars.push_back({cell_name("ee.r", a, t), -lp::kInfinity, lp::kInfinity});
      // r[a,t] = base0[t] * sum_b eps_b
      std::vector<Term> terms{{b.operating_column(k), 1.0}};
      for (int s = 0; s < segments; ++s) terms.push_back({s, -base_profile[t]});
      b.constraints.push_back({cell_name("ee.tie", a, t), std::move(terms), RowSense::equal, 0.0});
      b.load_map[static_cast<std::size_t>(grid.index(a, t))] = {{k, -1.0}};
    }
  }
  return b;
}

DerBlock build_pv_block(const PvParams& p, const TimeGrid& grid) {
  p.validate();
  auto b = empty_block("pv", "MW", grid);
  b.investment_vars.push_back({"pv.cap", 0.0, p.capacity_limit});
  b.investment_cost.push_back(p.unit_cost);
  for (int a = 1; a <= grid.years(); ++a) {
    for (int t = 0; t < grid.intervals_per_year(); ++t) {
      const double alpha = per_cell(p.capacity_factor, grid, a, t, "der.pv.capacity_factor");
      const int k = b.operating_count();
      b.operating_vars.push_back({cell_name("pv.g", a, t), -lp::kInfinity, lp::kInfinity});
      b.constraints.push_back({cell_name("pv.tie", a, t),
                               {{b.operating_column(k), 1.0}, {0, -alpha}},
                               RowSense::equal,
                               0.0});
      b.load_map[static_cast<std::size_t>(grid.index(a, t))] = {{k, -1.0}};
    }
  }
  return b;
}

DerBlock build_dr_block(const DrParams& p, const TimeGrid& grid) {
  p.validate();
  if (grid.intervals_per_year() < 2) {
    throw ValidationError("demand response needs at least 2 intervals per year");
  }
  auto b = empty_block("dr", "MW", grid);
  b.investment_vars.push_back({"dr.cap", 0.0, p.capacity_limit});
  b.investment_cost.push_back(p.unit_cost);
  const int T = grid.intervals_per_year();
  for (int a = 1; a <= grid.years(); ++a) {
    for (int t = 0; t < T; ++t) {
      const int k = b.operating_count();
      b.operating_vars.push_back({cell_name("dr.r", a, t), 0.0, lp::kInfinity});
      b.constraints.push_back({cell_name("dr.cap", a, t),
                               {{b.operating_column(k), 1.0}, {0, -1.0}},
                               RowSense::less_equal,
                               0.0});
      // Reduction now, rebound of rebound_factor * r in the next interval of
      // the same year; nothing carries into interval 0.
      auto& cell = b.load_map[static_cast<std::size_t>(grid.index(a, t))];
      cell.push_back({k, -1.0});
      if (t > 0) cell.push_back({k - 1, p.rebound_factor});
    }
  }
  return b;
}

DerBlock build_es_block(const EsParams& p, const TimeGrid& grid) {
  p.validate();
  auto b = empty_block("es", "MWh", grid);
  b.investment_vars.push_back({"es.cap", 0.0, p.capacity_limit});
  b.investment_cost.push_back(p.unit_cost);

  const int A = grid.years();
  const int T = grid.intervals_per_year();
  const double dt = grid.step_hours();

  // Operating layout: smax[a] for a = 1..A, then (c, d, s) per cell.
  for (int a = 1; a <= A; ++a) {
    b.operating_vars.push_back({fmt::format("es.smax[{}]", a), 0.0, lp::kInfinity});
  }
  auto smax = [&](int a) { return b.operating_column(a - 1); };
  auto c = [&](int a, int t) { return A + 3 * grid.index(a, t); };
  auto d = [&](int a, int t) { return c(a, t) + 1; };
  auto s = [&](int a, int t) { return c(a, t) + 2; };
  for (int a = 1; a <= A; ++a) {
    for (int t = 0; t < T; ++t) {
      b.operating_vars.push_back({cell_name("es.c", a, t), 0.0, lp::kInfinity});
      b.operating_vars.push_back({cell_name("es.d", a, t), 0.0, lp::kInfinity});
      b.operating_vars.push_back({cell_name("es.s", a, t), 0.0, lp::kInfinity});
      b.load_map[static_cast<std::size_t>(grid.index(a, t))] = {{c(a, t), 1.0}, {d(a, t), -1.0}};
    }
  }
  const int cap = 0;
  auto col = [&](int k) { return b.operating_column(k); };
  const double power = 1.0 / p.energy_power_ratio;

  for (int a = 1; a <= A; ++a) {
    // Capacity fade: smax[a] = smax[a-1] - beta * throughput(a-1), smax[1] = cap.
    std::vector<Term> fade{{smax(a), 1.0}};
    if (a == 1) {
      fade.push_back({cap, -1.0});
    } else {
      fade.push_back({smax(a - 1), -1.0});
      if (p.degradation > 0.0) {
        for (int t = 0; t < T; ++t) {
          const double k = p.degradation * grid.weight(t) * dt;
          fade.push_back({col(c(a - 1, t)), k});
          fade.push_back({col(d(a - 1, t)), k});
        }
      }
    }
    b.constraints.push_back({fmt::format("es.fade[{}]", a), std::move(fade), RowSense::equal, 0.0});

    for (int t = 0; t < T; ++t) {
      b.constraints.push_back({cell_name("es.pc", a, t),
                               {{col(c(a, t)), 1.0}, {cap, -power}},
                               RowSense::less_equal,
                               0.0});
      b.constraints.push_back({cell_name("es.pd", a, t),
                               {{col(d(a, t)), 1.0}, {cap, -power}},
                               RowSense::less_equal,
                               0.0});
      b.constraints.push_back({cell_name("es.soc_cap", a, t),
                               {{col(s(a, t)), 1.0}, {smax(a), -1.0}},
                               RowSense::less_equal,
                               0.0});
      // Periodic within the year: the interval after the last is the first.
      const int next = (t + 1) % T;
      std::vector<Term> soc{{col(c(a, t)), -p.charge_efficiency * dt},
                            {col(d(a, t)), dt / p.discharge_efficiency}};
      if (next != t) {
        soc.push_back({col(s(a, next)), 1.0});
        soc.push_back({col(s(a, t)), -1.0});
      }
      b.constraints.push_back({cell_name("es.soc", a, t), std::move(soc), RowSense::equal, 0.0});
    }
  }
  return b;
}

}  // namespace nwa::der
