#include <cmath>
#include <numeric>
#include <random>

#include "block_support.hpp"
#include "doctest.h"
#include "nwa/core/errors.hpp"
#include "nwa/der/builders.hpp"

using namespace nwa;
using namespace nwa::der;
using nwa::test::block_lp;
using nwa::test::max_violation;
using nwa::test::operating_part;

namespace {

std::vector<double> joint(const DerBlock& b, std::vector<double> inv, std::vector<double> op) {
  inv.insert(inv.end(), op.begin(), op.end());
  REQUIRE(inv.size() == static_cast<std::size_t>(b.variable_count()));
  return inv;
}

// Solves the block with investment fixed by bounds, minimizing `op_cost`.
std::vector<double> solve_with(DerBlock b, const std::vector<double>& inv,
                               const std::vector<double>& op_cost) {
  for (std::size_t k = 0; k < inv.size(); ++k) {
    b.investment_vars[k].lower = b.investment_vars[k].upper = inv[k];
  }
  std::vector<double> cost(inv.size(), 0.0);
  cost.insert(cost.end(), op_cost.begin(), op_cost.end());
  const auto sol = lp::solve_lp(block_lp(b, cost));
  REQUIRE(sol.optimal());
  return sol.primal;
}

PvParams pv_params(std::vector<double> alpha) {
  return PvParams{10.0, 2e6, std::move(alpha)};
}

EsParams es_params() {
  EsParams p;
  p.capacity_limit = 100.0;
  p.unit_cost = 350e3;
  p.charge_efficiency = 0.97;
  p.discharge_efficiency = 0.95;
  p.degradation = 1e-3;
  p.energy_power_ratio = 4.0;
  return p;
}

}  // namespace

TEST_CASE("energy efficiency block") {
  const auto grid = TimeGrid::uniform(3, 4);
  const std::vector<double> base(4, 50.0);

  SUBCASE("zero reduction costs nothing and changes nothing") {
    const auto b = build_ee_block({{0.1}, {1e6}}, base, grid);
    const auto x = solve_with(b, {0.0}, std::vector<double>(b.operating_vars.size(), 0.0));
    const auto load = der_load(b, operating_part(b, x), grid);
    for (double v : load.values()) CHECK(v == doctest::Approx(0.0));
    CHECK(der_investment_cost(b, std::vector<double>{0.0}) == 0.0);
  }

  SUBCASE("ten percent of a flat 50 MW base removes 5 MW everywhere") {
    const auto b = build_ee_block({{0.1}, {1e6}}, base, grid);
    const auto x = solve_with(b, {0.1}, std::vector<double>(b.operating_vars.size(), 0.0));
    const auto load = der_load(b, operating_part(b, x), grid);
    for (double v : load.values()) CHECK(v == doctest::Approx(-5.0));
    CHECK(der_investment_cost(b, std::vector<double>{0.1}) == doctest::Approx(1e5));
  }

  SUBCASE("cheapest segment fills first") {
    auto b = build_ee_block({{0.10, 0.10}, {1e6, 3e6}}, base, grid);
    // Require 15 % total reduction and minimize investment cost.
    b.constraints.push_back({"target", {{0, 1.0}, {1, 1.0}}, lp::RowSense::equal, 0.15});
    std::vector<double> cost(static_cast<std::size_t>(b.variable_count()), 0.0);
    cost[0] = 1e6;
    cost[1] = 3e6;
    const auto sol = lp::solve_lp(block_lp(b, cost));
    REQUIRE(sol.optimal());
    // Greedy fill of a convex piecewise-linear cost.
    double remaining = 0.15;
    std::vector<double> greedy;
    for (double size : {0.10, 0.10}) {
      greedy.push_back(std::min(size, remaining));
      remaining -= greedy.back();
    }
    CHECK(sol.primal[0] == doctest::Approx(greedy[0]).epsilon(1e-9));
    CHECK(sol.primal[1] == doctest::Approx(greedy[1]).epsilon(1e-9));
    CHECK(sol.objective == doctest::Approx(1e6 * 0.10 + 3e6 * 0.05));
  }

  SUBCASE("contribution follows the year-0 profile in every year") {
    const std::vector<double> shaped{40.0, 45.0, 60.0, 52.0};
    const auto b = build_ee_block({{0.2}, {1.0}}, shaped, grid);
    const auto x = solve_with(b, {0.07}, std::vector<double>(b.operating_vars.size(), 0.0));
    const auto load = der_load(b, operating_part(b, x), grid);
    for (int a = 1; a <= grid.years(); ++a) {
      for (int t = 0; t < 4; ++t) CHECK(load.at(a, t) == doctest::Approx(-0.07 * shaped[t]));
    }
  }

  SUBCASE("validation") {
    CHECK_THROWS_AS(build_ee_block({{-0.1}, {1.0}}, base, grid), ValidationError);
    CHECK_THROWS_AS(build_ee_block({{0.1, 0.1}, {2.0, 1.0}}, base, grid), ValidationError);
    CHECK_THROWS_AS(build_ee_block({{0.1}, {1.0, 2.0}}, base, grid), ValidationError);
    CHECK_THROWS_AS(build_ee_block({{0.1}, {1.0}}, std::vector<double>(3, 1.0), grid),
                    ShapeError);
  }
}

TEST_CASE("photovoltaic block") {
  const auto grid = TimeGrid::uniform(2, 24);
  std::vector<double> alpha(24, 0.0);
  for (int t = 6; t < 19; ++t) alpha[t] = std::sin(M_PI * (t - 6) / 12.0) * 0.8;
  alpha[12] = 0.5;
  const auto b = build_pv_block(pv_params(alpha), grid);
  const std::vector<double> zero_cost(b.operating_vars.size(), 0.0);

  SUBCASE("no capacity, no output") {
    const auto load = der_load(b, operating_part(b, solve_with(b, {0.0}, zero_cost)), grid);
    for (double v : load.values()) CHECK(v == doctest::Approx(0.0));
  }

  SUBCASE("2 MW at capacity factor 0.5 gives -1 MW at noon") {
    const auto load = der_load(b, operating_part(b, solve_with(b, {2.0}, zero_cost)), grid);
    CHECK(load.at(1, 12) == doctest::Approx(-1.0));
    CHECK(load.at(2, 12) == doctest::Approx(-1.0));
    for (int a = 1; a <= 2; ++a) {
      for (int t = 0; t < 24; ++t) CHECK(load.at(a, t) == doctest::Approx(-2.0 * alpha[t]));
    }
  }

  SUBCASE("annual energy matches direct summation") {
    const double cap = 3.7;
    const auto load = der_load(b, operating_part(b, solve_with(b, {cap}, zero_cost)), grid);
    double produced = 0.0;
    for (int t = 0; t < 24; ++t) produced -= load.at(1, t) * grid.step_hours() * grid.weight(t);
    double expected = 0.0;
    for (int t = 0; t < 24; ++t) expected += cap * alpha[t] * 1.0 * (8760.0 / 24.0);
    CHECK(produced == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("per-cell capacity factor series") {
    std::vector<double> full(static_cast<std::size_t>(grid.size()), 0.25);
    full[static_cast<std::size_t>(grid.index(2, 3))] = 0.75;
    const auto b2 = build_pv_block(pv_params(full), grid);
    const auto load =
        der_load(b2, operating_part(b2, solve_with(b2, {4.0}, zero_cost)), grid);
    CHECK(load.at(1, 3) == doctest::Approx(-1.0));
    CHECK(load.at(2, 3) == doctest::Approx(-3.0));
  }

  SUBCASE("unit cost $2/W on 1 MW") {
    CHECK(der_investment_cost(b, std::vector<double>{1.0}) == doctest::Approx(2'000'000.0));
  }

  SUBCASE("validation") {
    CHECK_THROWS_AS(build_pv_block(pv_params({1.2}), TimeGrid::uniform(1, 1)), ValidationError);
    CHECK_THROWS_AS(build_pv_block(pv_params({-0.1}), TimeGrid::uniform(1, 1)), ValidationError);
    CHECK_THROWS_AS(build_pv_block(pv_params(std::vector<double>(5, 0.1)), grid), ShapeError);
  }
}

TEST_CASE("demand response block") {
  const auto grid = TimeGrid::uniform(2, 6);
  const DrParams params{5.0, 1e5, 1.2};
  const auto b = build_dr_block(params, grid);

  SUBCASE("idle program adds no load") {
    std::vector<double> op(b.operating_vars.size(), 0.0);
    const auto load = der_load(b, op, grid);
    for (double v : load.values()) CHECK(v == 0.0);
  }

  SUBCASE("1 MW reduction rebounds as 1.2 MW in the next interval") {
    std::vector<double> op(b.operating_vars.size(), 0.0);
    op[1] = 1.0;  // year 1, interval 1
    const auto load = der_load(b, op, grid);
    CHECK(load.at(1, 1) == doctest::Approx(-1.0));
    CHECK(load.at(1, 2) == doctest::Approx(1.2));
    CHECK(load.at(1, 0) == 0.0);
    CHECK(load.at(1, 3) == 0.0);
  }

  SUBCASE("no rebound crosses a year boundary") {
    std::vector<double> op(b.operating_vars.size(), 0.0);
    op[5] = 1.0;  // last interval of year 1
    const auto load = der_load(b, op, grid);
    CHECK(load.at(2, 0) == 0.0);
  }

  SUBCASE("net energy telescopes to (alpha-1) times the reduction energy") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> op(b.operating_vars.size());
      for (auto& v : op) v = u(rng);
      op[5] = op[11] = 0.0;  // last interval of each year
      const auto load = der_load(b, op, grid);
      for (int a = 1; a <= 2; ++a) {
        double net = 0.0, reduced = 0.0;
        for (int t = 0; t < 6; ++t) {
          net += load.at(a, t) * grid.step_hours() * grid.weight(t);
          reduced += op[static_cast<std::size_t>(grid.index(a, t))] * grid.step_hours() *
                     grid.weight(t);
        }
        CHECK(net == doctest::Approx((params.rebound_factor - 1.0) * reduced).epsilon(1e-12));
      }
    }
  }

  SUBCASE("reductions are capped by the invested capacity") {
    std::vector<double> cost(b.operating_vars.size(), -1.0);
    const auto x = solve_with(b, {2.5}, cost);
    for (double r : operating_part(b, x)) CHECK(r <= 2.5 + 1e-9);
  }

  SUBCASE("validation") {
    CHECK_THROWS_AS(build_dr_block({1.0, 1.0, 0.9}, grid), ValidationError);
    CHECK_THROWS_AS(build_dr_block(params, TimeGrid::uniform(1, 1)), ValidationError);
  }
}

TEST_CASE("energy storage block") {
  const auto grid = TimeGrid::uniform(3, 8, 3.0);
  const auto p = es_params();
  const auto b = build_es_block(p, grid);
  const int A = grid.years();
  const int T = grid.intervals_per_year();
  auto c_idx = [&](int a, int t) { return static_cast<std::size_t>(A + 3 * grid.index(a, t)); };

  SUBCASE("zero capacity forces an idle device") {
    std::vector<double> cost(b.operating_vars.size(), -1.0);
    const auto x = solve_with(b, {0.0}, cost);
    for (double v : operating_part(b, x)) CHECK(v == doctest::Approx(0.0));
  }

  SUBCASE("one hour of 1 MW charge from empty stores 0.97 MWh") {
    const auto g1 = TimeGrid::uniform(1, 4);
    const auto b1 = build_es_block(es_params(), g1);
    const auto row = b1.constraints[static_cast<std::size_t>(1 + 4 * 0 + 3)];  // es.soc[1,0]
    REQUIRE(row.name == "es.soc[1,0]");
    // Evaluate the recursion with c = 1, d = 0, s(t) = 0 and solve for s(t+1).
    double coef_next = 0.0, rest = 0.0;
    for (const auto& term : row.terms) {
      const int k = term.column - b1.investment_count();
      if (k == 1 + 3 * 1 + 2) coef_next = term.coefficient;
      if (k == 1 + 0) rest += term.coefficient * 1.0;
    }
    CHECK(-rest / coef_next == doctest::Approx(0.97));
  }

  SUBCASE("round trip loses energy and arbitrage obeys the cycle balance") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> price(-50.0, 120.0);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> cost(b.operating_vars.size(), 0.0);
      for (int a = 1; a <= A; ++a) {
        for (int t = 0; t < T; ++t) {
          const double pr = price(rng);
          cost[c_idx(a, t)] = pr;
          cost[c_idx(a, t) + 1] = -pr;
        }
      }
      const auto x = solve_with(b, {40.0}, cost);
      REQUIRE(max_violation(b, x) < 1e-9);
      const auto op = operating_part(b, x);
      for (int a = 1; a <= A; ++a) {
        double charged = 0.0, discharged = 0.0;
        for (int t = 0; t < T; ++t) {
          charged += op[c_idx(a, t)] * grid.step_hours();
          discharged += op[c_idx(a, t) + 1] * grid.step_hours();
        }
        // Periodic SoC: what goes in (after losses) comes back out.
        CHECK(charged * p.charge_efficiency ==
              doctest::Approx(discharged / p.discharge_efficiency).epsilon(1e-9));
        CHECK(charged - discharged >= -1e-9);
      }
    }
  }

  SUBCASE("capacity fades with throughput and bounds hold") {
    std::vector<double> cost(b.operating_vars.size(), 0.0);
    for (int a = 1; a <= A; ++a) {
      for (int t = 0; t < T; ++t) {
        const double pr = (t % 4 < 2) ? 10.0 : 80.0;
        cost[c_idx(a, t)] = pr;
        cost[c_idx(a, t) + 1] = -pr;
      }
    }
    const auto x = solve_with(b, {40.0}, cost);
    const auto op = operating_part(b, x);
    for (int a = 1; a <= A; ++a) {
      if (a > 1) {
        double throughput = 0.0;
        for (int t = 0; t < T; ++t) {
          throughput += grid.weight(t) * grid.step_hours() * (op[c_idx(a - 1, t)] + op[c_idx(a - 1, t) + 1]);
        }
        CHECK(op[a - 1] == doctest::Approx(op[a - 2] - p.degradation * throughput).epsilon(1e-9));
        CHECK(op[a - 1] <= op[a - 2] + 1e-12);
      } else {
        CHECK(op[0] == doctest::Approx(40.0));
      }
      for (int t = 0; t < T; ++t) {
        CHECK(op[c_idx(a, t)] <= 40.0 / 4.0 + 1e-9);
        CHECK(op[c_idx(a, t) + 1] <= 40.0 / 4.0 + 1e-9);
        CHECK(op[c_idx(a, t) + 2] <= op[a - 1] + 1e-9);
      }
    }
  }

  SUBCASE("unit cost $350/kWh on 1 MWh") {
    CHECK(der_investment_cost(b, std::vector<double>{1.0}) == doctest::Approx(350'000.0));
  }

  SUBCASE("single-interval year keeps the recursion consistent") {
    const auto g1 = TimeGrid::uniform(1, 1, 8760.0);
    const auto b1 = build_es_block(es_params(), g1);
    std::vector<double> cost(b1.operating_vars.size(), 0.0);
    cost[1] = 1.0;
    cost[2] = -1.0;
    const auto x = solve_with(b1, {10.0}, cost);
    CHECK(max_violation(b1, x) < 1e-9);
    CHECK(x[2] == doctest::Approx(0.0));
  }

  SUBCASE("validation") {
    auto bad = p;
    bad.charge_efficiency = 0.0;
    CHECK_THROWS_AS(build_es_block(bad, grid), ValidationError);
    bad = p;
    bad.degradation = -1.0;
    CHECK_THROWS_AS(build_es_block(bad, grid), ValidationError);
    bad = p;
    bad.energy_power_ratio = 0.0;
    CHECK_THROWS_AS(build_es_block(bad, grid), ValidationError);
  }
}

TEST_CASE("block feasible sets are convex and load maps are linear") {
  const auto grid = TimeGrid::uniform(2, 6);
  const std::vector<DerBlock> blocks{
      build_ee_block({{0.05, 0.1}, {1e5, 2e5}}, std::vector<double>(6, 30.0), grid),
      build_pv_block(pv_params({0, 0.2, 0.6, 0.9, 0.4, 0}), grid),
      build_dr_block({4.0, 1e4, 1.3}, grid),
      build_es_block(es_params(), grid)};
  std::mt19937 rng(99);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& b : blocks) {
    CAPTURE(b.name);
    b.validate(grid);
    for (int trial = 0; trial < 8; ++trial) {
      // Two random vertices (bounded by a box on free variables).
      auto bounded = b;
      for (auto& v : bounded.investment_vars) v.upper = std::min(v.upper, 50.0);
      for (auto& v : bounded.operating_vars) {
        v.lower = std::max(v.lower, -1e3);
        v.upper = std::min(v.upper, 1e3);
      }
      std::vector<std::vector<double>> pts;
      for (int k = 0; k < 2; ++k) {
        std::vector<double> cost(static_cast<std::size_t>(b.variable_count()));
        for (auto& c : cost) c = n(rng);
        const auto sol = lp::solve_lp(block_lp(bounded, cost));
        REQUIRE(sol.optimal());
        CHECK(max_violation(b, sol.primal) < 1e-9);
        pts.push_back(sol.primal);
      }
      const double w = u(rng);
      std::vector<double> mix(pts[0].size());
      for (std::size_t j = 0; j < mix.size(); ++j) mix[j] = w * pts[0][j] + (1 - w) * pts[1][j];
      CHECK(max_violation(b, mix) < 1e-9);

      const auto op = operating_part(b, pts[0]);
      auto op2 = op;
      for (auto& v : op2) v *= 2.0;
      const auto l1 = der_load(b, op, grid);
      const auto l2 = der_load(b, op2, grid);
      for (std::size_t g = 0; g < l1.size(); ++g) {
        CHECK(l2.values()[g] == doctest::Approx(2.0 * l1.values()[g]));
      }
    }
    const auto zero = der_load(b, std::vector<double>(b.operating_vars.size(), 0.0), grid);
    for (double v : zero.values()) CHECK(v == 0.0);
  }
}

TEST_CASE("load and cost evaluation reject mismatched solutions") {
  const auto grid = TimeGrid::uniform(1, 4);
  const auto b = build_pv_block(pv_params({0.1, 0.2, 0.3, 0.4}), grid);
  CHECK_THROWS_AS(der_load(b, std::vector<double>(3, 0.0), grid), ShapeError);
  CHECK_THROWS_AS(der_investment_cost(b, std::vector<double>{1.0, 2.0}), ShapeError);
}
