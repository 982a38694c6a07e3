#include "nwa/lp/linear_program.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

namespace nwa::lp {

int LinearProgram::add_variable(std::string name, double lower, double upper, double cost) {
  variables_.push_back({std::move(name), lower, upper, cost});
  return static_cast<int>(variables_.size()) - 1;
}

int LinearProgram::add_row(std::string name, std::vector<Term> terms, RowSense sense,
                           double rhs) {
  rows_.push_back({std::move(name), std::move(terms), sense, rhs});
  return static_cast<int>(rows_.size()) - 1;
}

int LinearProgram::find_row(std::string_view name) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

void LinearProgram::validate() const {
  if (!std::isfinite(offset_)) throw std::invalid_argument("objective offset is not finite");
  for (const auto& v : variables_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper ||
        v.lower == kInfinity || v.upper == -kInfinity) {
      throw std::invalid_argument(fmt::format("variable '{}' has invalid bounds [{}, {}]", v.name,
                                              v.lower, v.upper));
    }
    if (!std::isfinite(v.cost)) {
      throw std::invalid_argument(fmt::format("variable '{}' has a non-finite cost", v.name));
    }
  }
  const int n = variable_count();
  for (const auto& r : rows_) {
    if (!std::isfinite(r.rhs)) {
      throw std::invalid_argument(fmt::format("row '{}' has a non-finite rhs", r.name));
    }
    for (const auto& t : r.terms) {
      if (t.column < 0 || t.column >= n) {
        throw std::invalid_argument(
            fmt::format("row '{}' references undeclared column {}", r.name, t.column));
      }
      if (!std::isfinite(t.coefficient)) {
        throw std::invalid_argument(fmt::format("row '{}' has a non-finite coefficient", r.name));
      }
    }
  }
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal:
      return "optimal";
    case SolveStatus::infeasible:
      return "infeasible";
    case SolveStatus::unbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

std::string lp_name(std::string_view raw, char prefix, std::size_t index) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
                    c == '(' || c == ')' || c == '[' || c == ']';
    out.push_back(ok ? c : '_');
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front())) || out.front() == '.') {
    out = fmt::format("{}{}_{}", prefix, index, out);
  }
  return out;
}

void write_terms(std::ostream& out, const std::vector<std::pair<double, std::string>>& terms) {
  if (terms.empty()) {
    out << " 0";
    return;
  }
  int on_line = 0;
  for (const auto& [coef, name] : terms) {
    out << (coef < 0 ? " - " : " + ") << fmt::format("{:.17g}", std::abs(coef)) << ' ' << name;
    if (++on_line % 6 == 0) out << "\n   ";
  }
}

}  // namespace

void write_lp_format(const LinearProgram& lp, std::ostream& out) {
  std::vector<std::string> names;
  names.reserve(lp.variables().size());
  for (std::size_t j = 0; j < lp.variables().size(); ++j) {
    names.push_back(lp_name(lp.variables()[j].name, 'x', j));
  }

  out << "\\ objective offset " << fmt::format("{:.17g}", lp.objective_offset()) << "\n";
  out << "Minimize\n obj:";
  std::vector<std::pair<double, std::string>> terms;
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (lp.variables()[j].cost != 0.0) terms.emplace_back(lp.variables()[j].cost, names[j]);
  }
  write_terms(out, terms);
  out << "\nSubject To\n";
  for (std::size_t i = 0; i < lp.rows().size(); ++i) {
    const auto& row = lp.rows()[i];
    terms.clear();
    for (const auto& t : row.terms) {
      terms.emplace_back(t.coefficient, names[static_cast<std::size_t>(t.column)]);
    }
    out << ' ' << lp_name(row.name, 'r', i) << ':';
    write_terms(out, terms);
    const char* sense = row.sense == RowSense::less_equal ? "<=" : row.sense == RowSense::equal ? "=" : ">=";
    out << ' ' << sense << ' ' << fmt::format("{:.17g}", row.rhs) << '\n';
  }
  out << "Bounds\n";
  for (std::size_t j = 0; j < names.size(); ++j) {
    const auto& v = lp.variables()[j];
    if (v.lower == -kInfinity && v.upper == kInfinity) {
      out << ' ' << names[j] << " free\n";
    } else if (v.lower == v.upper) {
      out << ' ' << names[j] << " = " << fmt::format("{:.17g}", v.lower) << '\n';
    } else {
      out << ' ' << (v.lower == -kInfinity ? std::string("-inf") : fmt::format("{:.17g}", v.lower))
          << " <= " << names[j] << " <= "
          << (v.upper == kInfinity ? std::string("+inf") : fmt::format("{:.17g}", v.upper)) << '\n';
    }
  }
  out << "End\n";
}

}  // namespace nwa::lp
