#include <Eigen/Dense>
#include <random>
#include <sstream>

#include "doctest.h"
#include "nwa/lp/linear_program.hpp"

using namespace nwa::lp;

namespace {

// Brute-force optimum of a box-bounded LP by enumerating every vertex: each
// choice of n active hyperplanes among rows and bounds is solved densely and
// kept if feasible. Returns +inf when no vertex is feasible.
double vertex_enumeration(const LinearProgram& lp) {
  const int n = lp.variable_count();
  struct Plane {
    Eigen::VectorXd a;
    double b;
  };
  std::vector<Plane> planes;
  for (const auto& row : lp.rows()) {
    Plane p{Eigen::VectorXd::Zero(n), row.rhs};
    for (const auto& t : row.terms) p.a[t.column] += t.coefficient;
    planes.push_back(p);
  }
  for (int j = 0; j < n; ++j) {
    for (double bound : {lp.variables()[j].lower, lp.variables()[j].upper}) {
      Plane p{Eigen::VectorXd::Zero(n), bound};
      p.a[j] = 1.0;
      planes.push_back(p);
    }
  }
  auto feasible = [&](const Eigen::VectorXd& x) {
    for (int j = 0; j < n; ++j) {
      if (x[j] < lp.variables()[j].lower - 1e-9 || x[j] > lp.variables()[j].upper + 1e-9) return false;
    }
    for (const auto& row : lp.rows()) {
      double act = 0.0;
      for (const auto& t : row.terms) act += t.coefficient * x[t.column];
      if (row.sense != RowSense::greater_equal && act > row.rhs + 1e-9) return false;
      if (row.sense != RowSense::less_equal && act < row.rhs - 1e-9) return false;
    }
    return true;
  };
  double best = kInfinity;
  const int k = static_cast<int>(planes.size());
  std::vector<int> pick(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pick[i] = i;
  while (true) {
    Eigen::MatrixXd m(n, n);
    Eigen::VectorXd rhs(n);
    for (int r = 0; r < n; ++r) {
      m.row(r) = planes[pick[r]].a.transpose();
      rhs[r] = planes[pick[r]].b;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (lu.isInvertible()) {
      const Eigen::VectorXd x = lu.solve(rhs);
      if (feasible(x)) {
        double obj = lp.objective_offset();
        for (int j = 0; j < n; ++j) obj += lp.variables()[j].cost * x[j];
        best = std::min(best, obj);
      }
    }
    int i = n - 1;
    while (i >= 0 && pick[i] == k - n + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int r = i + 1; r < n; ++r) pick[r] = pick[r - 1] + 1;
  }
  return best;
}

// Dual objective sum_i y_i b_i + sum_j d_j x_j(bound) with sign checks.
double checked_dual_objective(const LinearProgram& lp, const LpSolution& s) {
  double dual_obj = lp.objective_offset();
  for (int i = 0; i < lp.row_count(); ++i) {
    const auto& row = lp.rows()[i];
    const double mu = s.dual[i];
    if (row.sense == RowSense::less_equal) CHECK(mu >= -1e-7);
    if (row.sense == RowSense::greater_equal) CHECK(mu <= 1e-7);
    dual_obj -= mu * row.rhs;
  }
  for (int j = 0; j < lp.variable_count(); ++j) {
    const auto& v = lp.variables()[j];
    const double d = s.reduced_cost[j];
    if (d > 1e-7) {
      REQUIRE(std::isfinite(v.lower));
      CHECK(s.primal[j] == doctest::Approx(v.lower).epsilon(1e-7));
      dual_obj += d * v.lower;
    } else if (d < -1e-7) {
      REQUIRE(std::isfinite(v.upper));
      CHECK(s.primal[j] == doctest::Approx(v.upper).epsilon(1e-7));
      dual_obj += d * v.upper;
    }
  }
  return dual_obj;
}

LinearProgram random_box_lp(std::mt19937_64& rng, int n, int m) {
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_real_distribution<double> lo(-3.0, 0.0);
  std::uniform_real_distribution<double> width(0.5, 6.0);
  std::uniform_int_distribution<int> sense(0, 5);
  LinearProgram lp;
  std::vector<double> x0;
  for (int j = 0; j < n; ++j) {
    const double l = lo(rng);
    const double u = l + width(rng);
    lp.add_variable("x" + std::to_string(j), l, u, coef(rng));
    x0.push_back(l + 0.5 * (u - l));
  }
  for (int i = 0; i < m; ++i) {
    std::vector<Term> terms;
    double act = 0.0;
    for (int j = 0; j < n; ++j) {
      const double a = coef(rng);
      terms.push_back({j, a});
      act += a * x0[j];
    }
    const int s = sense(rng);
    // Anchor half of the rows at the box midpoint so most instances are
    // feasible; the rest are random cuts that sometimes make it infeasible.
    const double rhs = act + (i % 2 == 0 ? coef(rng) * 0.3 : coef(rng));
    if (s == 0) {
      lp.add_row("e" + std::to_string(i), terms, RowSense::equal, act);
    } else if (s <= 2) {
      lp.add_row("g" + std::to_string(i), terms, RowSense::greater_equal, rhs);
    } else {
      lp.add_row("l" + std::to_string(i), terms, RowSense::less_equal, rhs);
    }
  }
  return lp;
}

}  // namespace

TEST_CASE("single-variable programs") {
  SUBCASE("lower bound row") {
    LinearProgram lp;
    const int x = lp.add_variable("x", 0.0, 10.0, 1.0);
    lp.add_row("floor", {{x, 1.0}}, RowSense::greater_equal, 3.0);
    const auto s = solve_lp(lp);
    REQUIRE(s.optimal());
    CHECK(s.primal[0] == doctest::Approx(3.0));
    CHECK(s.objective == doctest::Approx(3.0));
    CHECK(s.dual[0] == doctest::Approx(-1.0));
  }
  SUBCASE("dual of a binding less-equal row is +1") {
    LinearProgram lp;
    const int x = lp.add_variable("x", 0.0, kInfinity, -1.0);
    lp.add_row("cap", {{x, 1.0}}, RowSense::less_equal, 5.0);
    const auto s = solve_lp(lp);
    REQUIRE(s.optimal());
    CHECK(s.primal[0] == doctest::Approx(5.0));
    CHECK(s.dual[0] == doctest::Approx(1.0));
  }
}

TEST_CASE("status reporting") {
  SUBCASE("infeasible") {
    LinearProgram lp;
    const int x = lp.add_variable("x", 0.0, 1.0, 1.0);
    lp.add_row("r", {{x, 1.0}}, RowSense::greater_equal, 2.0);
    CHECK(solve_lp(lp).status == SolveStatus::infeasible);
  }
  SUBCASE("unbounded") {
    LinearProgram lp;
    const int x = lp.add_variable("x", -kInfinity, kInfinity, 1.0);
    const int y = lp.add_variable("y", 0.0, kInfinity, 0.0);
    lp.add_row("r", {{x, 1.0}, {y, -1.0}}, RowSense::less_equal, 0.0);
    CHECK(solve_lp(lp).status == SolveStatus::unbounded);
  }
  SUBCASE("no rows") {
    LinearProgram lp;
    lp.add_variable("x", -2.0, 4.0, 1.0);
    lp.add_variable("y", -2.0, 4.0, -1.0);
    lp.set_objective_offset(10.0);
    const auto s = solve_lp(lp);
    REQUIRE(s.optimal());
    CHECK(s.objective == doctest::Approx(10.0 - 2.0 - 4.0));
  }
  SUBCASE("malformed programs are rejected") {
    LinearProgram lp;
    lp.add_variable("x", 1.0, 0.0, 0.0);
    CHECK_THROWS_AS(solve_lp(lp), std::invalid_argument);
    LinearProgram lp2;
    lp2.add_variable("x", 0.0, 1.0, 0.0);
    lp2.add_row("r", {{3, 1.0}}, RowSense::equal, 0.0);
    CHECK_THROWS_AS(solve_lp(lp2), std::invalid_argument);
  }
}

TEST_CASE("transportation toy matches vertex enumeration") {
  // Two sources (supply 20, 30) to one sink pair; three open lanes.
  LinearProgram lp;
  const int a = lp.add_variable("a_to_1", 0.0, 25.0, 4.0);
  const int b = lp.add_variable("b_to_1", 0.0, 25.0, 6.0);
  const int c = lp.add_variable("b_to_2", 0.0, 25.0, 3.0);
  lp.add_row("supply_a", {{a, 1.0}}, RowSense::less_equal, 20.0);
  lp.add_row("supply_b", {{b, 1.0}, {c, 1.0}}, RowSense::less_equal, 30.0);
  lp.add_row("demand_1", {{a, 1.0}, {b, 1.0}}, RowSense::greater_equal, 25.0);
  lp.add_row("demand_2", {{c, 1.0}}, RowSense::greater_equal, 5.0);
  const auto s = solve_lp(lp);
  REQUIRE(s.optimal());
  const double truth = vertex_enumeration(lp);
  CHECK(truth == doctest::Approx(125.0));
  CHECK(s.objective == doctest::Approx(truth).epsilon(1e-9));
  CHECK(checked_dual_objective(lp, s) == doctest::Approx(s.objective).epsilon(1e-9));
}

TEST_CASE("random box LPs agree with vertex enumeration and satisfy strong duality") {
  std::mt19937_64 rng(2024);
  int optimal = 0;
  int infeasible = 0;
  for (int k = 0; k < 300; ++k) {
    const int n = 2 + k % 3;
    const int m = 1 + k % 4;
    const auto lp = random_box_lp(rng, n, m);
    const double truth = vertex_enumeration(lp);
    const auto s = solve_lp(lp);
    if (!std::isfinite(truth)) {
      CHECK(s.status == SolveStatus::infeasible);
      ++infeasible;
      continue;
    }
    REQUIRE(s.optimal());
    ++optimal;
    CHECK(s.objective == doctest::Approx(truth).epsilon(1e-7));
    CHECK(checked_dual_objective(lp, s) == doctest::Approx(s.objective).epsilon(1e-7));
  }
  CHECK(optimal > 100);
  CHECK(infeasible > 0);
}

TEST_CASE("row scaling scales the dual inversely") {
  LinearProgram lp;
  const int x = lp.add_variable("x", 0.0, kInfinity, -3.0);
  const int y = lp.add_variable("y", 0.0, kInfinity, -2.0);
  lp.add_row("r1", {{x, 1.0}, {y, 1.0}}, RowSense::less_equal, 4.0);
  lp.add_row("r2", {{x, 1.0}, {y, 3.0}}, RowSense::less_equal, 6.0);
  lp.add_row("r3", {{x, 1.0}}, RowSense::less_equal, 3.0);
  const auto base = solve_lp(lp);
  REQUIRE(base.optimal());

  auto scaled = lp;
  for (auto& t : scaled.mutable_rows()[0].terms) t.coefficient *= 7.0;
  scaled.mutable_rows()[0].rhs *= 7.0;
  const auto s = solve_lp(scaled);
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(base.objective));
  CHECK(s.primal[0] == doctest::Approx(base.primal[0]));
  CHECK(s.primal[1] == doctest::Approx(base.primal[1]));
  CHECK(s.dual[0] == doctest::Approx(base.dual[0] / 7.0));
  CHECK(s.dual[1] == doctest::Approx(base.dual[1]));
}

TEST_CASE("solves are deterministic") {
  std::mt19937_64 rng(5);
  const auto lp = random_box_lp(rng, 4, 3);
  const auto a = solve_lp(lp);
  const auto b = solve_lp(lp);
  CHECK(a.status == b.status);
  CHECK(a.primal == b.primal);
  CHECK(a.dual == b.dual);
}

TEST_CASE("degenerate staircase with free variables") {
  // Storage-like chain: s_{t+1} = s_t + c_t - d_t, periodic, prices favour
  // charging early and discharging late.
  LinearProgram lp;
  const int T = 30;
  std::vector<int> s, c, d;
  for (int t = 0; t < T; ++t) {
    s.push_back(lp.add_variable("s" + std::to_string(t), 0.0, 10.0, 0.0));
    const double price = t < T / 2 ? 1.0 : 3.0;
    c.push_back(lp.add_variable("c" + std::to_string(t), 0.0, 2.5, price));
    d.push_back(lp.add_variable("d" + std::to_string(t), 0.0, 2.5, -price * 0.9));
  }
  for (int t = 0; t < T; ++t) {
    lp.add_row("soc" + std::to_string(t),
               {{s[(t + 1) % T], 1.0}, {s[t], -1.0}, {c[t], -1.0}, {d[t], 1.0}}, RowSense::equal,
               0.0);
  }
  const auto sol = solve_lp(lp);
  REQUIRE(sol.optimal());
  // 10 MWh bought at 1 and sold at 2.7.
  CHECK(sol.objective == doctest::Approx(-17.0).epsilon(1e-9));
  CHECK(checked_dual_objective(lp, sol) == doctest::Approx(sol.objective).epsilon(1e-9));
}

TEST_CASE("LP text dump") {
  LinearProgram lp;
  const int x = lp.add_variable("x", 0.0, 10.0, 1.5);
  const int y = lp.add_variable("y free", -kInfinity, kInfinity, 0.0);
  lp.add_row("cap", {{x, 1.0}, {y, -2.0}}, RowSense::less_equal, 4.0);
  std::ostringstream out;
  write_lp_format(lp, out);
  const auto text = out.str();
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("cap: + 1 x - 2 y_free <= 4") != std::string::npos);
  CHECK(text.find("y_free free") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}
