// Bounded-variable revised primal simplex.
//
// Every row i gets a logical column r_i = a_i'x, so the working system is
// [A | -I] z = 0 with bounds on all n+m columns. The basis starts at the
// logicals; infeasible basics are repaired by a composite phase 1 that
// minimizes the sum of bound violations. The basis is kept as a sparse LU
// plus a product-form eta file, refactored every `refactor_interval` pivots.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/LU>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <fmt/format.h>

#include "nwa/lp/linear_program.hpp"

namespace nwa::lp {
namespace {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

struct CscMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> start;
  std::vector<int> index;
  std::vector<double> value;
};

CscMatrix to_csc(const LinearProgram& lp) {
  CscMatrix a;
  a.rows = lp.row_count();
  a.cols = lp.variable_count();
  a.start.assign(static_cast<std::size_t>(a.cols) + 1, 0);
  for (const auto& row : lp.rows()) {
    for (const auto& t : row.terms) {
      if (t.coefficient != 0.0) ++a.start[static_cast<std::size_t>(t.column) + 1];
    }
  }
  std::partial_sum(a.start.begin(), a.start.end(), a.start.begin());
  a.index.resize(static_cast<std::size_t>(a.start.back()));
  a.value.resize(a.index.size());
  std::vector<int> fill(a.start.begin(), a.start.end() - 1);
  for (int i = 0; i < a.rows; ++i) {
    for (const auto& t : lp.rows()[static_cast<std::size_t>(i)].terms) {
      if (t.coefficient == 0.0) continue;
      const auto k = static_cast<std::size_t>(fill[static_cast<std::size_t>(t.column)]++);
      a.index[k] = i;
      a.value[k] = t.coefficient;
    }
  }
  return a;
}

double round_pow2(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) return 1.0;
  return std::ldexp(1.0, static_cast<int>(std::lround(std::log2(s))));
}

struct Scaling {
  std::vector<double> row;
  std::vector<double> col;
  double objective = 1.0;
};

// Geometric-mean equilibration, rounded to powers of two so scaling is exact.
Scaling compute_scaling(const CscMatrix& a, const LinearProgram& lp, bool enabled) {
  Scaling s;
  s.row.assign(static_cast<std::size_t>(a.rows), 1.0);
  s.col.assign(static_cast<std::size_t>(a.cols), 1.0);
  if (!enabled) return s;
  std::vector<double> lo(static_cast<std::size_t>(a.rows));
  std::vector<double> hi(static_cast<std::size_t>(a.rows));
  for (int pass = 0; pass < 6; ++pass) {
    std::fill(lo.begin(), lo.end(), kInfinity);
    std::fill(hi.begin(), hi.end(), 0.0);
    for (int j = 0; j < a.cols; ++j) {
      for (int k = a.start[j]; k < a.start[j + 1]; ++k) {
        const double v = std::abs(a.value[k]) * s.col[j];
        lo[a.index[k]] = std::min(lo[a.index[k]], v);
        hi[a.index[k]] = std::max(hi[a.index[k]], v);
      }
    }
    for (int i = 0; i < a.rows; ++i) {
      if (hi[i] > 0.0) s.row[i] = 1.0 / std::sqrt(lo[i] * hi[i]);
    }
    for (int j = 0; j < a.cols; ++j) {
      double clo = kInfinity;
      double chi = 0.0;
      for (int k = a.start[j]; k < a.start[j + 1]; ++k) {
        const double v = std::abs(a.value[k]) * s.row[a.index[k]];
        clo = std::min(clo, v);
        chi = std::max(chi, v);
      }
      if (chi > 0.0) s.col[j] = 1.0 / std::sqrt(clo * chi);
    }
  }
  for (auto& r : s.row) r = round_pow2(r);
  for (auto& c : s.col) c = round_pow2(c);
  double cmax = 0.0;
  for (int j = 0; j < a.cols; ++j) {
    cmax = std::max(cmax, std::abs(lp.variables()[static_cast<std::size_t>(j)].cost) * s.col[j]);
  }
  if (cmax > 0.0) s.objective = round_pow2(1.0 / cmax);
  return s;
}

constexpr double kRelativePivotTolerance = 1e-7;
constexpr double kBoundPerturbation = 1e-6;

enum class VarState : unsigned char { basic, at_lower, at_upper, at_zero };

class BasisFactor {
 public:
  explicit BasisFactor(int m) : m_(m) {}

  // False if the basis is singular.
  bool factorize(const SparseMatrix& b) {
    etas_.clear();
    if (m_ == 0) return true;
    lu_.compute(b);
    return lu_.info() == Eigen::Success;
  }

  std::string error() const { return lu_.lastErrorMessage(); }

  void ftran(std::vector<double>& x) const {
    if (m_ == 0) return;
    Eigen::Map<Eigen::VectorXd> v(x.data(), m_);
    Eigen::VectorXd z = lu_.solve(v);
    v = z;
    for (const auto& e : etas_) {
      const double xp = x[e.pos] / e.pivot;
      if (xp != 0.0) {
        for (std::size_t k = 0; k < e.idx.size(); ++k) x[e.idx[k]] -= e.val[k] * xp;
      }
      x[e.pos] = xp;
    }
  }

  void btran(std::vector<double>& y) const {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = y[it->pos];
      for (std::size_t k = 0; k < it->idx.size(); ++k) s -= it->val[k] * y[it->idx[k]];
      y[it->pos] = s / it->pivot;
    }
    Eigen::Map<Eigen::VectorXd> v(y.data(), m_);
    Eigen::VectorXd z = lu_.transpose().solve(v);
    v = z;
  }

  // alpha = B^-1 a_q for the entering column replacing basis position pos.
  void push_eta(int pos, const std::vector<double>& alpha) {
    Eta e;
    e.pos = pos;
    e.pivot = alpha[pos];
    for (int i = 0; i < m_; ++i) {
      if (i != pos && alpha[i] != 0.0) {
        e.idx.push_back(i);
        e.val.push_back(alpha[i]);
      }
    }
    etas_.push_back(std::move(e));
  }

  int eta_count() const { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    int pos = 0;
    double pivot = 1.0;
    std::vector<int> idx;
    std::vector<double> val;
  };

  int m_;
  mutable Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
};

class Simplex {
 public:
  Simplex(CscMatrix a, std::vector<double> lower, std::vector<double> upper,
          std::vector<double> cost, const SimplexOptions& options)
      : a_(std::move(a)),
        m_(a_.rows),
        n_(a_.cols),
        lower_(std::move(lower)),
        upper_(std::move(upper)),
        cost_(std::move(cost)),
        opt_(options),
        factor_(a_.rows) {
    max_iterations_ = opt_.max_iterations > 0 ? opt_.max_iterations : 50 * (m_ + n_) + 10000;
  }

  SolveStatus solve(const Basis* start);

  const std::vector<double>& values() const { return x_; }
  int iterations() const { return iterations_; }

  // Simplex multipliers of the phase-2 objective at the final basis.
  std::vector<double> multipliers() const {
    std::vector<double> y(static_cast<std::size_t>(m_));
    for (int p = 0; p < m_; ++p) y[p] = cost_[head_[p]];
    factor_.btran(y);
    return y;
  }

 private:
  struct Ratio {
    int position = -1;
    double theta = kInfinity;
    double target = 0.0;
    bool flip = false;
  };

  int total() const { return n_ + m_; }

  void load_column(int j, std::vector<double>& dense) const {
    std::fill(dense.begin(), dense.end(), 0.0);
    if (j < n_) {
      for (int k = a_.start[j]; k < a_.start[j + 1]; ++k) dense[a_.index[k]] += a_.value[k];
    } else {
      dense[j - n_] = -1.0;
    }
  }

  double dot_column(int j, const std::vector<double>& y) const {
    if (j >= n_) return -y[j - n_];
    double s = 0.0;
    for (int k = a_.start[j]; k < a_.start[j + 1]; ++k) s += a_.value[k] * y[a_.index[k]];
    return s;
  }

  void refactor() {
    if (!factor_.factorize(basis_matrix())) {
      repair_basis();
      if (!factor_.factorize(basis_matrix())) {
        throw SolverFailure("simplex basis is singular after repair: " + factor_.error());
      }
    }
    fresh_ = true;
  }

  // Swaps dependent basic columns for the logicals of the rows they leave
  // uncovered. Dense, but only runs after a failed factorization.
  void repair_basis() {
    const Eigen::MatrixXd b(basis_matrix());
    Eigen::FullPivLU<Eigen::MatrixXd> cols(b);
    const auto rank = cols.rank();
    std::vector<int> kept;
    std::vector<int> dropped;
    for (Eigen::Index k = 0; k < m_; ++k) {
      const int p = cols.permutationQ().indices()(k);
      (k < rank ? kept : dropped).push_back(p);
    }
    Eigen::MatrixXd sub(m_, rank);
    for (Eigen::Index k = 0; k < rank; ++k) sub.col(k) = b.col(kept[static_cast<std::size_t>(k)]);
    Eigen::FullPivLU<Eigen::MatrixXd> rows(sub.transpose());
    std::vector<int> uncovered;
    for (Eigen::Index k = rank; k < m_; ++k) uncovered.push_back(rows.permutationQ().indices()(k));
    for (std::size_t k = 0; k < dropped.size(); ++k) {
      const int p = dropped[k];
      const int j = head_[p];
      if (std::isfinite(lower_[j])) {
        state_[j] = VarState::at_lower;
        x_[j] = lower_[j];
      } else if (std::isfinite(upper_[j])) {
        state_[j] = VarState::at_upper;
        x_[j] = upper_[j];
      } else {
        state_[j] = VarState::at_zero;
        x_[j] = 0.0;
      }
      const int logical = n_ + uncovered[k];
      head_[p] = logical;
      state_[logical] = VarState::basic;
    }
  }

  SparseMatrix basis_matrix() const {
    std::vector<Eigen::Triplet<double>> triplets;
    for (int p = 0; p < m_; ++p) {
      const int j = head_[p];
      if (j < n_) {
        for (int k = a_.start[j]; k < a_.start[j + 1]; ++k) {
          triplets.emplace_back(a_.index[k], p, a_.value[k]);
        }
      } else {
        triplets.emplace_back(j - n_, p, -1.0);
      }
    }
    SparseMatrix b(m_, m_);
    b.setFromTriplets(triplets.begin(), triplets.end());
    b.makeCompressed();
    return b;
  }

  void recompute_basic() {
    std::vector<double> rhs(static_cast<std::size_t>(m_), 0.0);
    for (int j = 0; j < total(); ++j) {
      if (state_[j] == VarState::basic || x_[j] == 0.0) continue;
      if (j < n_) {
        for (int k = a_.start[j]; k < a_.start[j + 1]; ++k) rhs[a_.index[k]] -= a_.value[k] * x_[j];
      } else {
        rhs[j - n_] += x_[j];
      }
    }
    factor_.ftran(rhs);
    for (int p = 0; p < m_; ++p) x_[head_[p]] = rhs[p];
  }

  void initialize(const Basis* start) {
    x_.assign(static_cast<std::size_t>(total()), 0.0);
    state_.assign(static_cast<std::size_t>(total()), VarState::at_zero);
    head_.resize(static_cast<std::size_t>(m_));
    auto rest_at_bound = [&](int j, bool prefer_upper) {
      if (prefer_upper && std::isfinite(upper_[j])) {
        state_[j] = VarState::at_upper;
      } else if (std::isfinite(lower_[j])) {
        state_[j] = VarState::at_lower;
      } else if (std::isfinite(upper_[j])) {
        state_[j] = VarState::at_upper;
      } else {
        state_[j] = VarState::at_zero;
      }
    };
    const bool warm = start && start->size() == static_cast<std::size_t>(total()) &&
                      std::count(start->begin(), start->end(), BasisStatus::basic) == m_;
    if (warm) {
      int p = 0;
      for (int j = 0; j < total(); ++j) {
        const BasisStatus b = (*start)[static_cast<std::size_t>(j)];
        if (b == BasisStatus::basic) {
          state_[j] = VarState::basic;
          head_[p++] = j;
        } else {
          rest_at_bound(j, b == BasisStatus::at_upper);
        }
      }
    } else {
      for (int j = 0; j < n_; ++j) rest_at_bound(j, false);
      for (int p = 0; p < m_; ++p) {
        head_[p] = n_ + p;
        state_[n_ + p] = VarState::basic;
      }
    }
    place_nonbasic();
  }

  void place_nonbasic() {
    for (int j = 0; j < total(); ++j) {
      if (state_[j] == VarState::at_lower) x_[j] = lower_[j];
      if (state_[j] == VarState::at_upper) x_[j] = upper_[j];
      if (state_[j] == VarState::at_zero) x_[j] = 0.0;
    }
  }

 public:
  Basis basis() const {
    Basis out(static_cast<std::size_t>(total()));
    for (int j = 0; j < total(); ++j) {
      switch (state_[j]) {
        case VarState::basic: out[j] = BasisStatus::basic; break;
        case VarState::at_lower: out[j] = BasisStatus::at_lower; break;
        case VarState::at_upper: out[j] = BasisStatus::at_upper; break;
        case VarState::at_zero: out[j] = BasisStatus::at_zero; break;
      }
    }
    return out;
  }

 private:
  Ratio ratio_test(int q, double dir, const std::vector<double>& alpha, bool phase1,
                   bool bland) const;
  SolveStatus iterate();
  void perturb_bounds();

  CscMatrix a_;
  int m_;
  int n_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> cost_;
  SimplexOptions opt_;
  BasisFactor factor_;
  std::vector<double> x_;
  std::vector<VarState> state_;
  std::vector<int> head_;
  int iterations_ = 0;
  int max_iterations_ = 0;
  bool fresh_ = false;
  std::vector<double> exact_lower_;
  std::vector<double> exact_upper_;
};

Simplex::Ratio Simplex::ratio_test(int q, double dir, const std::vector<double>& alpha,
                                   bool phase1, bool bland) const {
  const double tol = opt_.primal_tolerance;
  // Bound the basic variable at position p moves toward, or NaN if it does
  // not block.
  auto target_of = [&](int p, double rate) {
    const int j = head_[p];
    const double xj = x_[j];
    double target;
    if (rate < 0.0) {
      if (phase1 && xj > upper_[j] + tol) {
        target = upper_[j];
      } else if (xj < lower_[j] - tol) {
        return std::nan("");
      } else {
        target = lower_[j];
      }
    } else {
      if (phase1 && xj < lower_[j] - tol) {
        target = lower_[j];
      } else if (xj > upper_[j] + tol) {
        return std::nan("");
      } else {
        target = upper_[j];
      }
    }
    return std::isfinite(target) ? target : std::nan("");
  };

  Ratio best;
  const double range = upper_[q] - lower_[q];
  // Pivots small relative to the column are numerically zero; taking one
  // leaves a singular basis behind.
  double amax = 0.0;
  for (double v : alpha) amax = std::max(amax, std::abs(v));
  const double ptol = std::max(opt_.pivot_tolerance, kRelativePivotTolerance * amax);

  if (bland) {
    for (int p = 0; p < m_; ++p) {
      if (std::abs(alpha[p]) <= ptol) continue;
      const double rate = -dir * alpha[p];
      const double target = target_of(p, rate);
      if (std::isnan(target)) continue;
      const double ratio = std::max(0.0, (target - x_[head_[p]]) / rate);
      if (ratio < best.theta - 1e-12 ||
          (ratio <= best.theta + 1e-12 && best.position >= 0 && head_[p] < head_[best.position])) {
        best = {p, ratio, target, false};
      }
    }
    if (std::isfinite(range) && range <= best.theta) best = {-1, range, 0.0, true};
    return best;
  }

  // Harris two-pass: find the largest step allowed with bounds relaxed by
  // tol, then among the blocking rows within it take the largest pivot.
  double theta_max = kInfinity;
  for (int p = 0; p < m_; ++p) {
    if (std::abs(alpha[p]) <= ptol) continue;
    const double rate = -dir * alpha[p];
    const double target = target_of(p, rate);
    if (std::isnan(target)) continue;
    const double relaxed = rate < 0.0 ? (x_[head_[p]] - (target - tol)) / -rate
                                      : ((target + tol) - x_[head_[p]]) / rate;
    theta_max = std::min(theta_max, relaxed);
  }
  if (std::isfinite(range) && range <= theta_max) return {-1, range, 0.0, true};
  if (!std::isfinite(theta_max)) return best;

  double best_pivot = 0.0;
  for (int p = 0; p < m_; ++p) {
    if (std::abs(alpha[p]) <= ptol) continue;
    const double rate = -dir * alpha[p];
    const double target = target_of(p, rate);
    if (std::isnan(target)) continue;
    const double ratio = (target - x_[head_[p]]) / rate;
    if (ratio <= theta_max && std::abs(alpha[p]) > best_pivot) {
      best_pivot = std::abs(alpha[p]);
      best = {p, std::max(0.0, ratio), target, false};
    }
  }
  return best;
}

SolveStatus Simplex::solve(const Basis* start) {
  initialize(start);
  if (opt_.perturb) perturb_bounds();
  refactor();
  recompute_basic();
  SolveStatus status = iterate();
  if (opt_.perturb) {
    // Finish on the exact bounds from the basis found.
    lower_ = exact_lower_;
    upper_ = exact_upper_;
    place_nonbasic();
    recompute_basic();
    fresh_ = false;
    status = iterate();
  }
  return status;
}

// Widens every finite bound by a small seeded random amount so that
// degenerate vertices split apart and zero-length steps become rare.
void Simplex::perturb_bounds() {
  exact_lower_ = lower_;
  exact_upper_ = upper_;
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  for (int j = 0; j < total(); ++j) {
    if (std::isfinite(lower_[j])) lower_[j] -= kBoundPerturbation * (1.0 + std::abs(lower_[j])) * u(rng);
    if (std::isfinite(upper_[j])) upper_[j] += kBoundPerturbation * (1.0 + std::abs(upper_[j])) * u(rng);
  }
  place_nonbasic();
}

SolveStatus Simplex::iterate() {
  const double ptol = opt_.primal_tolerance;
  const double dtol = opt_.dual_tolerance;
  std::vector<double> y(static_cast<std::size_t>(m_));
  std::vector<double> alpha(static_cast<std::size_t>(m_));
  int degenerate_run = 0;

  for (;;) {
    if (iterations_ >= max_iterations_) {
      throw SolverFailure(fmt::format("simplex iteration limit ({}) reached", max_iterations_));
    }
    bool phase1 = false;
    for (int p = 0; p < m_; ++p) {
      const int j = head_[p];
      if (x_[j] < lower_[j] - ptol) {
        y[p] = -1.0;
        phase1 = true;
      } else if (x_[j] > upper_[j] + ptol) {
        y[p] = 1.0;
        phase1 = true;
      } else {
        y[p] = 0.0;
      }
    }
    if (!phase1) {
      for (int p = 0; p < m_; ++p) y[p] = cost_[head_[p]];
    }
    factor_.btran(y);

    const bool bland = degenerate_run > 50;
    int q = -1;
    double dq = 0.0;
    double best = 0.0;
    for (int j = 0; j < total(); ++j) {
      const VarState s = state_[j];
      if (s == VarState::basic || lower_[j] == upper_[j]) continue;
      const double d = (phase1 ? 0.0 : cost_[j]) - dot_column(j, y);
      const bool eligible = (s == VarState::at_lower && d < -dtol) ||
                            (s == VarState::at_upper && d > dtol) ||
                            (s == VarState::at_zero && std::abs(d) > dtol);
      if (!eligible) continue;
      if (bland) {
        q = j;
        dq = d;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        q = j;
        dq = d;
      }
    }

    if (q < 0) {
      if (!fresh_) {
        // Confirm on a fresh factorization before trusting the result.
        refactor();
        recompute_basic();
        continue;
      }
      return phase1 ? SolveStatus::infeasible : SolveStatus::optimal;
    }

    load_column(q, alpha);
    factor_.ftran(alpha);
    const double dir = dq < 0.0 ? 1.0 : -1.0;
    const Ratio r = ratio_test(q, dir, alpha, phase1, bland);
    if (!r.flip && r.position < 0) {
      if (phase1) throw SolverFailure("phase 1 ray without a blocking variable");
      return SolveStatus::unbounded;
    }

    ++iterations_;
    const double theta = r.theta;
    degenerate_run = theta <= 1e-12 ? degenerate_run + 1 : 0;
    x_[q] += dir * theta;
    if (theta != 0.0) {
      for (int p = 0; p < m_; ++p) {
        if (alpha[p] != 0.0) x_[head_[p]] -= dir * alpha[p] * theta;
      }
    }

    if (r.flip) {
      state_[q] = dir > 0.0 ? VarState::at_upper : VarState::at_lower;
      x_[q] = dir > 0.0 ? upper_[q] : lower_[q];
      continue;
    }

    const int leaving = head_[r.position];
    x_[leaving] = r.target;
    state_[leaving] = r.target == lower_[leaving] ? VarState::at_lower : VarState::at_upper;
    head_[r.position] = q;
    state_[q] = VarState::basic;
    factor_.push_eta(r.position, alpha);
    fresh_ = false;
    if (factor_.eta_count() >= opt_.refactor_interval) {
      refactor();
      recompute_basic();
    }
  }
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  return solve_lp(lp, options, nullptr);
}

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options, const Basis* start) {
  lp.validate();
  CscMatrix a = to_csc(lp);
  const Scaling s = compute_scaling(a, lp, options.scale);
  const int m = a.rows;
  const int n = a.cols;

  for (int j = 0; j < n; ++j) {
    for (int k = a.start[j]; k < a.start[j + 1]; ++k) a.value[k] *= s.row[a.index[k]] * s.col[j];
  }
  std::vector<double> lower(static_cast<std::size_t>(n + m));
  std::vector<double> upper(static_cast<std::size_t>(n + m));
  std::vector<double> cost(static_cast<std::size_t>(n + m), 0.0);
  for (int j = 0; j < n; ++j) {
    const auto& v = lp.variables()[static_cast<std::size_t>(j)];
    lower[j] = v.lower / s.col[j];
    upper[j] = v.upper / s.col[j];
    cost[j] = v.cost * s.col[j] * s.objective;
  }
  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows()[static_cast<std::size_t>(i)];
    const double b = row.rhs * s.row[i];
    lower[n + i] = row.sense == RowSense::less_equal ? -kInfinity : b;
    upper[n + i] = row.sense == RowSense::greater_equal ? kInfinity : b;
  }

  Simplex simplex(std::move(a), std::move(lower), std::move(upper), std::move(cost), options);
  LpSolution sol;
  sol.status = simplex.solve(start);
  sol.basis = simplex.basis();
  sol.iterations = simplex.iterations();

  const auto& z = simplex.values();
  sol.primal.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) sol.primal[j] = z[j] * s.col[j];

  if (sol.status != SolveStatus::optimal) {
    sol.dual.assign(static_cast<std::size_t>(m), 0.0);
    sol.reduced_cost.assign(static_cast<std::size_t>(n), 0.0);
    sol.objective = sol.status == SolveStatus::infeasible ? kInfinity : -kInfinity;
    return sol;
  }

  const std::vector<double> y = simplex.multipliers();
  sol.dual.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) sol.dual[i] = -y[i] * s.row[i] / s.objective;

  sol.objective = lp.objective_offset();
  sol.reduced_cost.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const auto& v = lp.variables()[static_cast<std::size_t>(j)];
    sol.objective += v.cost * sol.primal[j];
    sol.reduced_cost[j] = v.cost;
    const double slack = 1e-6 * (1.0 + std::max(std::abs(std::isfinite(v.lower) ? v.lower : 0.0),
                                                std::abs(std::isfinite(v.upper) ? v.upper : 0.0)));
    if (sol.primal[j] < v.lower - slack || sol.primal[j] > v.upper + slack) {
      throw SolverFailure(fmt::format("variable '{}' = {} violates bounds [{}, {}]", v.name,
                                      sol.primal[j], v.lower, v.upper));
    }
    sol.primal[j] = std::clamp(sol.primal[j], v.lower, v.upper);
  }
  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows()[static_cast<std::size_t>(i)];
    double activity = 0.0;
    double magnitude = std::abs(row.rhs);
    for (const auto& t : row.terms) {
      const double term = t.coefficient * sol.primal[static_cast<std::size_t>(t.column)];
      activity += term;
      magnitude = std::max(magnitude, std::abs(term));
      sol.reduced_cost[static_cast<std::size_t>(t.column)] += sol.dual[i] * t.coefficient;
    }
    const double slack = 1e-6 * (1.0 + magnitude);
    const bool violated = (row.sense != RowSense::greater_equal && activity > row.rhs + slack) ||
                          (row.sense != RowSense::less_equal && activity < row.rhs - slack);
    if (violated) {
      throw SolverFailure(fmt::format("row '{}' activity {} violates rhs {}", row.name, activity,
                                      row.rhs));
    }
  }
  return sol;
}

}  // namespace nwa::lp
