#include <cmath>
#include <random>

#include "doctest.h"
#include "nwa/core/economics.hpp"
#include "nwa/core/errors.hpp"
#include "nwa/core/load.hpp"

using namespace nwa;

namespace {

// Exhaustive scan: the year j for which every year <= j is within the limit
// and year j+1 (if any) is over it.
int capex_by_scan(const std::vector<double>& peaks, double limit) {
  const int horizon = static_cast<int>(peaks.size());
  for (int j = 0; j <= horizon; ++j) {
    bool prefix_ok = true;
    for (int a = 1; a <= j; ++a) prefix_ok = prefix_ok && peaks[a - 1] <= limit;
    const bool next_violates = j == horizon || peaks[j] > limit;
    if (prefix_ok && next_violates) return j;
  }
  return -1;
}

Economics econ_with(double rate, double cost) {
  Economics e;
  e.discount_rate = rate;
  e.expansion_cost = cost;
  e.capacity_limit = 60.0;
  e.energy_price = {100.0};
  return e;
}

}  // namespace

TEST_CASE("time grid covers a year") {
  const auto g = TimeGrid::uniform(2, 24);
  CHECK(g.size() == 48);
  CHECK(g.weight(0) == doctest::Approx(365.0));
  CHECK(g.index(2, 3) == 27);
  CHECK_THROWS_AS(TimeGrid(1, 2, 1.0, {1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(TimeGrid(0, 1, 1.0, {8760.0}), ValidationError);
  CHECK_THROWS_AS(TimeGrid(1, 2, 1.0, {8760.0}), ShapeError);
}

TEST_CASE("grow_load") {
  SUBCASE("zero growth is the identity") {
    const auto g = TimeGrid::uniform(3, 4);
    const auto load = grow_load(std::vector<double>(4, 10.0), 0.0, g);
    for (double v : load.values()) CHECK(v == 10.0);
  }
  SUBCASE("peak after seven years") {
    const auto g = TimeGrid::uniform(20, 2);
    const auto load = grow_load(std::vector<double>{30.0, 48.5}, 0.035, g);
    CHECK(load.at(7, 1) == doctest::Approx(61.70554424417878).epsilon(1e-12));
    CHECK(yearly_peak(load)[0] == doctest::Approx(50.1975).epsilon(1e-12));
  }
  SUBCASE("negative growth halves") {
    const auto g = TimeGrid::uniform(2, 1);
    CHECK(grow_load(std::vector<double>{1.0}, -0.5, g).at(2, 0) == doctest::Approx(0.25));
  }
  SUBCASE("shape and range errors") {
    const auto g = TimeGrid::uniform(2, 3);
    CHECK_THROWS_AS(grow_load(std::vector<double>{1.0, 2.0}, 0.0, g), ShapeError);
    CHECK_THROWS_AS(grow_load(std::vector<double>{1.0, 2.0, 3.0}, -1.0, g), ValidationError);
  }
}

TEST_CASE("yearly_peak") {
  CHECK(yearly_peak(LoadSeries(2, 3, {5, 5, 5, 5, 5, 5})) == std::vector<double>{5.0, 5.0});
  CHECK(yearly_peak(LoadSeries(1, 3, {3, 7, 2})) == std::vector<double>{7.0});
}

TEST_CASE("capex_year") {
  const std::vector<double> low{10, 20, 30};
  CHECK(capex_year(low, 60.0) == 3);
  CHECK(capex_year(std::vector<double>{50, 55, 61, 62}, 60.0) == 2);
  CHECK(capex_year(std::vector<double>{61, 50}, 60.0) == 0);
  CHECK(capex_year(std::vector<double>{60, 60}, 60.0) == 2);

  std::vector<double> peaks;
  for (int a = 1; a <= 20; ++a) peaks.push_back(48.5 * std::pow(1.035, a));
  CHECK(capex_year(peaks, 60.0) == 6);

  SUBCASE("agrees with an exhaustive scan on random series") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(40.0, 70.0);
    std::uniform_int_distribution<int> len(1, 25);
    for (int k = 0; k < 500; ++k) {
      std::vector<double> p(static_cast<std::size_t>(len(rng)));
      for (auto& v : p) v = u(rng);
      REQUIRE(capex_year(p, 60.0) == capex_by_scan(p, 60.0));
    }
  }
}

TEST_CASE("present_expansion_cost") {
  const auto e = econ_with(0.07, 60e6);
  CHECK(present_expansion_cost(0, e) == 60e6);
  CHECK(present_expansion_cost(14, e) == doctest::Approx(60e6 / std::pow(1.07, 14)).epsilon(1e-9));
  CHECK(present_expansion_cost(14, e) == doctest::Approx(23.27e6).epsilon(1e-3));
  CHECK(present_expansion_cost(20, e) == doctest::Approx(15.51e6).epsilon(1e-3));
  for (int d = 0; d < 30; ++d) {
    CHECK(present_expansion_cost(d + 1, e) < present_expansion_cost(d, e));
  }
}

TEST_CASE("present_energy_cost") {
  const auto g = TimeGrid::uniform(1, 1);
  const auto e = econ_with(0.07, 0.0);
  CHECK(present_energy_cost(LoadSeries::zeros(g), e, g) == 0.0);
  const LoadSeries one(1, 1, {1.0});
  CHECK(present_energy_cost(one, e, g) == doctest::Approx(876000.0 / 1.07).epsilon(1e-12));
  const LoadSeries minus(1, 1, {-1.0});
  CHECK(present_energy_cost(minus, e, g) == -present_energy_cost(one, e, g));

  SUBCASE("linear in load") {
    const auto g2 = TimeGrid::uniform(3, 5);
    auto e2 = e;
    e2.energy_price = {10, 20, 30, 40, 50};
    std::mt19937 rng(3);
    std::normal_distribution<double> n(0, 10);
    auto x = LoadSeries::zeros(g2);
    auto y = LoadSeries::zeros(g2);
    for (auto& v : x.values()) v = n(rng);
    for (auto& v : y.values()) v = n(rng);
    auto z = x;
    z *= 2.5;
    z += y;
    const double lhs = present_energy_cost(z, e2, g2);
    const double rhs = 2.5 * present_energy_cost(x, e2, g2) + present_energy_cost(y, e2, g2);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
  SUBCASE("price series shape") {
    const auto g2 = TimeGrid::uniform(2, 3);
    auto e2 = e;
    e2.energy_price = {1, 2};
    CHECK_THROWS_AS(present_energy_cost(LoadSeries::zeros(g2), e2, g2), ShapeError);
    CHECK_THROWS_AS(present_energy_cost(LoadSeries::zeros(g), e2, g2), ShapeError);
  }
}

TEST_CASE("present_demand_charge") {
  auto e = econ_with(0.07, 0.0);
  e.demand_charge_rate = 120000.0;
  CHECK(present_demand_charge(std::vector<double>{0, 0}, e) == 0.0);
  const std::vector<double> peaks{50, 50};
  const double expected = 120000.0 * 50.0 * (1 / 1.07 + 1 / (1.07 * 1.07));
  CHECK(present_demand_charge(peaks, e) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(present_demand_charge(peaks, e) == doctest::Approx(10848109.005).epsilon(1e-9));
  CHECK(present_demand_charge(std::vector<double>{100, 100}, e) ==
        doctest::Approx(2 * expected).epsilon(1e-12));
}

TEST_CASE("economics validation names the field") {
  auto e = econ_with(-0.01, 1.0);
  CHECK_THROWS_WITH_AS(e.validate(), doctest::Contains("discount_rate"), ValidationError);
  e = econ_with(0.07, -1.0);
  CHECK_THROWS_WITH_AS(e.validate(), doctest::Contains("expansion_cost"), ValidationError);
}
