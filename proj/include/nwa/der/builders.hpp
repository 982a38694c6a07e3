#pragma once

#include <vector>

#include "nwa/der/der_block.hpp"

namespace nwa::der {

/// Energy efficiency: a convex piecewise-linear cost over percentage
/// reduction of the year-0 base profile.
struct EeParams {
  std::vector<double> segment_sizes;           // fraction of base load per segment
  std::vector<double> segment_marginal_costs;  // $ per unit fraction, nondecreasing

  void validate() const;
};

struct PvParams {
  Megawatts capacity_limit = 0.0;
  double unit_cost = 0.0;  // $/MW
  /// In [0,1]; one value per interval of a year, or per (year, interval).
  std::vector<double> capacity_factor;

  void validate() const;
};

struct DrParams {
  Megawatts capacity_limit = 0.0;
  double unit_cost = 0.0;  // $/MW
  double rebound_factor = 1.0;

  void validate() const;
};

struct EsParams {
  double capacity_limit = 0.0;  // MWh
  double unit_cost = 0.0;       // $/MWh
  double charge_efficiency = 1.0;
  double discharge_efficiency = 1.0;
  double degradation = 0.0;     // MWh of capacity lost per MWh of charge+discharge
  double energy_power_ratio = 4.0;

  void validate() const;
};

DerBlock build_ee_block(const EeParams& p, std::span<const double> base_profile,
                        const TimeGrid& grid);
DerBlock build_pv_block(const PvParams& p, const TimeGrid& grid);
DerBlock build_dr_block(const DrParams& p, const TimeGrid& grid);
DerBlock build_es_block(const EsParams& p, const TimeGrid& grid);

}  // namespace nwa::der
