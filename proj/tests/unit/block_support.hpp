#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "nwa/der/der_block.hpp"
#include "nwa/lp/linear_program.hpp"

namespace nwa::test {

// LP over an isolated block with caller-chosen costs on the joint variable
// vector (investment first).
inline lp::LinearProgram block_lp(const der::DerBlock& b, const std::vector<double>& cost) {
  lp::LinearProgram out;
  int k = 0;
  for (const auto& v : b.investment_vars) out.add_variable(v.name, v.lower, v.upper, cost[k++]);
  for (const auto& v : b.operating_vars) out.add_variable(v.name, v.lower, v.upper, cost[k++]);
  for (const auto& r : b.constraints) out.add_row(r.name, r.terms, r.sense, r.rhs);
  return out;
}

// Largest violation of the block's rows and bounds at joint point x.
inline double max_violation(const der::DerBlock& b, const std::vector<double>& x) {
  double worst = 0.0;
  const auto n_inv = b.investment_vars.size();
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto& v = j < n_inv ? b.investment_vars[j] : b.operating_vars[j - n_inv];
    worst = std::max({worst, v.lower - x[j], x[j] - v.upper});
  }
  for (const auto& r : b.constraints) {
    double act = 0.0;
    for (const auto& t : r.terms) act += t.coefficient * x[static_cast<std::size_t>(t.column)];
    const double gap = act - r.rhs;
    switch (r.sense) {
      case lp::RowSense::less_equal: worst = std::max(worst, gap); break;
      case lp::RowSense::greater_equal: worst = std::max(worst, -gap); break;
      case lp::RowSense::equal: worst = std::max(worst, std::abs(gap)); break;
    }
  }
  return worst;
}

inline std::vector<double> operating_part(const der::DerBlock& b, const std::vector<double>& x) {
  return {x.begin() + b.investment_count(), x.end()};
}

}  // namespace nwa::test
