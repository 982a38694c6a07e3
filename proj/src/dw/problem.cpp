#include "nwa/dw/problem.hpp"

#include <fmt/format.h>

#include "nwa/core/errors.hpp"

namespace nwa {

void PlanningProblem::validate() const {
  economics.validate();
  if (!base_load.matches(grid)) throw ShapeError("base load does not match the grid");
  (void)economics.price(grid, 1, 0);
  for (const auto& b : blocks) b.validate(grid);
  if (!(settings.rc_tolerance >= 0.0)) throw ValidationError("solver.rc_tolerance must be >= 0");
  if (settings.max_iterations < 1) throw ValidationError("solver.max_iterations must be >= 1");
  if (settings.stagnation_window < 1) {
    throw ValidationError("solver.stagnation_window must be >= 1");
  }
  if (!(settings.smoothing >= 0.0 && settings.smoothing < 1.0)) {
    throw ValidationError("solver.smoothing must lie in [0, 1)");
  }
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::reduced_cost:
      return "reduced_cost";
    case Termination::stagnation:
      return "stagnation";
    case Termination::iteration_limit:
      return "iteration_limit";
    case Termination::exact:
      return "exact";
  }
  return "unknown";
}

const DerResult* Plan::find(std::string_view name) const {
  for (const auto& d : ders) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

}  // namespace nwa
