// nwa: plan, check and sweep non-wire-alternative scenarios from the shell.
//
// exit codes: 0 ok, 1 oracle disagreement or other failure, 2 invalid input,
// 3 solver stopped before converging, 4 file I/O problem.

#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "nwa/app/export.hpp"
#include "nwa/app/profile.hpp"
#include "nwa/app/scenario.hpp"
#include "nwa/app/sweep.hpp"
#include "nwa/dw/decomposition.hpp"
#include "nwa/oracle/monolithic.hpp"

namespace {

using namespace nwa;

enum Exit : int { kOk = 0, kFailure = 1, kInvalid = 2, kNotConverged = 3, kIo = 4 };

struct Overrides {
  std::optional<int> max_iters;
  std::optional<double> rc_tol;
};

app::Scenario load(const std::string& path, const Overrides& o) {
  auto s = app::load_scenario(path);
  if (o.max_iters) s.solver.max_iterations = *o.max_iters;
  if (o.rc_tol) s.solver.rc_tolerance = *o.rc_tol;
  if (o.max_iters || o.rc_tol) {
    if (auto errs = app::validate_scenario(s); !errs.empty()) throw app::ScenarioError(errs);
  }
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void print_plan(const Plan& p) {
  fmt::print("engine          {}\n", p.engine);
  fmt::print("expansion year  {}\n", p.expansion_year);
  for (const auto& d : p.ders) {
    fmt::print("  {:<4} {:>12.4f} {:<8} invest {:>14.2f}  operate {:>14.2f}\n", d.name, d.capacity,
               d.capacity_unit, d.investment_cost, d.operating_cost);
  }
  const auto& c = p.costs;
  fmt::print("nwa investment  {:>16.2f}\n", c.nwa_investment);
  fmt::print("nwa operation   {:>16.2f}\n", c.nwa_operation);
  fmt::print("demand charge   {:>16.2f}\n", c.demand_charge);
  fmt::print("expansion       {:>16.2f}\n", c.expansion);
  fmt::print("objective       {:>16.2f}\n", p.objective);
  if (!p.iterations.empty()) {
    fmt::print("iterations      {} ({}, bound gap {:.2e})\n", p.iterations.size(),
               to_string(p.termination), p.bound_gap);
  }
}

int cmd_plan(const std::string& file, const Overrides& o, const std::string& engine,
             const std::string& out_dir, const std::string& format) {
  const auto fmt_kind = app::parse_format(format);
  const auto s = load(file, o);
  const auto problem = app::build_problem(s);
  const auto t0 = std::chrono::steady_clock::now();
  const Plan plan = engine == "oracle" ? oracle::solve_monolithic(problem) : dw::run_dwda(problem);
  spdlog::info("{} solved {} in {:.2f} s", plan.engine, s.name, seconds_since(t0));
  for (const auto& r : plan.iterations) {
    spdlog::debug("it {:>4}  obj {:.6f}  rc {:.3e}  delta {:>3}  pool {:>4}  bound {:.6f}",
                  r.iteration, r.master_objective, r.reduced_cost, r.delta, r.pool_size,
                  r.lower_bound);
  }
  print_plan(plan);
  if (!out_dir.empty()) {
    app::export_plan(plan, out_dir, fmt_kind);
    spdlog::info("wrote {} output to {}", format, out_dir);
  }
  if (!plan.converged) {
    spdlog::warn("stopped after {} iterations without meeting the tolerance",
                 plan.iterations.size());
    return kNotConverged;
  }
  return kOk;
}

int cmd_oracle_check(const std::string& file, const Overrides& o, double gap_tol) {
  const auto s = load(file, o);
  const auto problem = app::build_problem(s);
  auto t0 = std::chrono::steady_clock::now();
  const Plan dw = dw::run_dwda(problem);
  const double t_dw = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  const Plan exact = oracle::solve_monolithic(problem);
  const double t_exact = seconds_since(t0);
  const double gap = std::abs(dw.objective - exact.objective) / std::max(1.0, std::abs(exact.objective));
  fmt::print("{:<10} {:>5} {:>18} {:>9}\n", "engine", "year", "objective", "seconds");
  fmt::print("{:<10} {:>5} {:>18.2f} {:>9.2f}\n", dw.engine, dw.expansion_year, dw.objective, t_dw);
  fmt::print("{:<10} {:>5} {:>18.2f} {:>9.2f}\n", exact.engine, exact.expansion_year,
             exact.objective, t_exact);
  fmt::print("relative gap {:.3e} (tolerance {:.1e})\n", gap, gap_tol);
  const bool agree = gap <= gap_tol && dw.expansion_year == exact.expansion_year;
  fmt::print("{}\n", agree ? "agree" : "DISAGREE");
  if (!dw.converged) return kNotConverged;
  return agree ? kOk : kFailure;
}

int cmd_sweep(const std::string& file, const Overrides& o, const std::string& param,
              const std::vector<double>& values, const std::string& out) {
  const auto s = load(file, o);
  const auto table = app::run_sweep(s, {param, values}, [&](const app::SweepRow& r) {
    if (r.ok) {
      spdlog::info("{} = {}: year {}, objective {:.2f}, {} iterations", param, r.value,
                   r.expansion_year, r.objective, r.iterations);
    } else {
      spdlog::error("{} = {}: {}", param, r.value, r.error);
    }
  });
  fmt::print("{:>12} {:>5}", param.substr(param.rfind('.') + 1), "year");
  for (const auto& d : table.ders) fmt::print(" {:>10}", d);
  fmt::print(" {:>18}\n", "objective");
  bool all_ok = true, all_converged = true;
  for (const auto& r : table.rows) {
    all_ok = all_ok && r.ok;
    all_converged = all_converged && r.converged;
    if (!r.ok) {
      fmt::print("{:>12} failed: {}\n", r.value, r.error);
      continue;
    }
    fmt::print("{:>12} {:>5}", r.value, r.expansion_year);
    for (double c : r.capacities) fmt::print(" {:>10.4f}", c);
    fmt::print(" {:>18.2f}{}\n", r.objective, r.converged ? "" : " *");
  }
  if (!out.empty()) app::write_sweep_csv(table, out);
  if (!all_ok) return kFailure;
  return all_converged ? kOk : kNotConverged;
}

int cmd_validate(const std::string& file) {
  const auto s = app::load_scenario(file);
  const auto p = app::build_problem(s);
  fmt::print("{}: ok ({} years x {} intervals, {} resources)\n", file, p.grid.years(),
             p.grid.intervals_per_year(), p.blocks.size());
  return kOk;
}

int cmd_synth(double peak, std::uint64_t seed, int block_hours, const std::string& out) {
  app::SynthShape shape;
  shape.seed = seed;
  const auto hourly = app::synth_profile(peak, shape);
  spdlog::info("load factor {:.3f}", app::load_factor(hourly));
  if (block_hours > 0) {
    app::write_series_csv(out, app::peak_day_blocks(hourly, block_hours));
  } else {
    app::write_series_csv(out, hourly);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Plan distributed resources against a substation upgrade"};
  cli.require_subcommand(1);
  cli.fallthrough();
  std::string log_level = "warn";
  cli.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  Overrides o;
  std::string scenario, out_dir, format = "json", engine = "dwda", out, param;
  std::vector<double> values;
  double gap_tol = 1e-4, peak = 0.0;
  std::uint64_t seed = 2016;
  int block_hours = 0;

  const auto solver_flags = [&](CLI::App* c) {
    c->add_option("scenario", scenario, "scenario YAML file")->required();
    c->add_option("--max-iters", o.max_iters, "override solver.max_iterations");
    c->add_option("--rc-tol", o.rc_tol, "override solver.rc_tolerance");
  };

  auto* plan = cli.add_subcommand("plan", "solve a scenario and report the plan");
  solver_flags(plan);
  plan->add_option("--engine", engine, "dwda or oracle")->check(CLI::IsMember({"dwda", "oracle"}));
  plan->add_option("--out-dir", out_dir, "write the plan here");
  plan->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* check = cli.add_subcommand("oracle-check", "compare decomposition with the direct LP");
  solver_flags(check);
  check->add_option("--gap-tol", gap_tol, "relative objective tolerance");

  auto* sweep = cli.add_subcommand("sweep", "re-solve for each value of one parameter");
  solver_flags(sweep);
  sweep->add_option("--param", param, "parameter path, e.g. der.es.unit_cost")->required();
  sweep->add_option("--values", values, "comma separated values")->required()->delimiter(',');
  sweep->add_option("--out", out, "write the table as CSV");

  auto* validate = cli.add_subcommand("validate", "check a scenario file");
  validate->add_option("scenario", scenario, "scenario YAML file")->required();

  auto* synth = cli.add_subcommand("synth", "write a synthetic 8760 h load profile");
  synth->add_option("--peak", peak, "annual peak, MW")->required();
  synth->add_option("--seed", seed, "random seed");
  synth->add_option("--block-hours", block_hours,
                    "write only the peak day, as the max of each block of this many hours");
  synth->add_option("--out", out, "output CSV")->required();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  auto logger = spdlog::stderr_color_mt("nwa");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%^%l%$: %v");
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*plan) return cmd_plan(scenario, o, engine, out_dir, format);
    if (*check) return cmd_oracle_check(scenario, o, gap_tol);
    if (*sweep) return cmd_sweep(scenario, o, param, values, out);
    if (*validate) return cmd_validate(scenario);
    if (*synth) return cmd_synth(peak, seed, block_hours, out);
  } catch (const app::ScenarioError& e) {
    for (const auto& msg : e.errors()) spdlog::error("{}", msg);
    return kInvalid;
  } catch (const ValidationError& e) {
    spdlog::error("{}", e.what());
    return kInvalid;
  } catch (const ShapeError& e) {
    spdlog::error("{}", e.what());
    return kInvalid;
  } catch (const app::IoError& e) {
    spdlog::error("{}", e.what());
    return kIo;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kFailure;
  }
  return kOk;
}
