#pragma once

#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nwa::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { less_equal, equal, greater_equal };

struct Term {
  int column;
  double coefficient;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  double cost = 0.0;
};

struct Row {
  std::string name;
  std::vector<Term> terms;
  RowSense sense = RowSense::less_equal;
  double rhs = 0.0;
};

/// Sparse minimization LP: min c'x + offset subject to row constraints and
/// variable bounds.
class LinearProgram {
 public:
  int add_variable(std::string name, double lower, double upper, double cost = 0.0);
  int add_row(std::string name, std::vector<Term> terms, RowSense sense, double rhs);

  void set_cost(int column, double cost) { variables_.at(static_cast<std::size_t>(column)).cost = cost; }
  void add_cost(int column, double cost) { variables_.at(static_cast<std::size_t>(column)).cost += cost; }
  void set_objective_offset(double offset) { offset_ = offset; }
  double objective_offset() const { return offset_; }

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::vector<Row>& mutable_rows() { return rows_; }
  int variable_count() const { return static_cast<int>(variables_.size()); }
  int row_count() const { return static_cast<int>(rows_.size()); }

  /// Index of the first row called `name`, or -1.
  int find_row(std::string_view name) const;

  /// Throws std::invalid_argument on NaN/inf coefficients, dangling column
  /// references or crossed bounds.
  void validate() const;

 private:
  std::vector<Variable> variables_;
  std::vector<Row> rows_;
  double offset_ = 0.0;
};

enum class SolveStatus { optimal, infeasible, unbounded };

/// Status of every variable, structural columns first, then one logical per
/// row. Feeding a previous basis back speeds up re-solves of similar LPs.
enum class BasisStatus : unsigned char { basic, at_lower, at_upper, at_zero };
using Basis = std::vector<BasisStatus>;

const char* to_string(SolveStatus status);

/// Dual sign convention: dual[i] = -d(objective)/d(rhs_i). A binding
/// less-equal row therefore has dual >= 0, a binding greater-equal row
/// dual <= 0; equality rows are free. reduced_cost[j] = c_j + sum_i dual_i a_ij.
struct LpSolution {
  SolveStatus status = SolveStatus::infeasible;
  std::vector<double> primal;
  std::vector<double> dual;
  std::vector<double> reduced_cost;
  double objective = 0.0;
  int iterations = 0;
  Basis basis;

  bool optimal() const { return status == SolveStatus::optimal; }
};

/// Raised when the simplex cannot certify a result (singular basis,
/// iteration limit, residuals above tolerance after recovery).
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimplexOptions {
  double primal_tolerance = 1e-9;
  double dual_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  int refactor_interval = 64;
  int max_iterations = 0;  // 0: derived from problem size
  bool scale = true;
  bool perturb = true;  // randomized bound shifts against degeneracy, removed before returning
};

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

/// Starts from `start` when it has one entry per column and row and exactly
/// one basic variable per row; otherwise from the all-logical basis.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options, const Basis* start);

/// CPLEX LP text format, for cross-checking with external solvers.
void write_lp_format(const LinearProgram& lp, std::ostream& out);

}  // namespace nwa::lp
