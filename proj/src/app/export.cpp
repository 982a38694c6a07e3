#include "nwa/app/export.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>

#include "nwa/app/scenario.hpp"

namespace nwa::app {
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

// JSON has no NaN or infinity; those travel as strings.
Json encode(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ValidationError(fmt::format("'{}' is not a number", s));
  }
  return j.get<double>();
}

Json encode(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(encode(x));
  return a;
}

std::vector<double> decode(const Json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number(x));
  return out;
}

Json series(const LoadSeries& s) {
  return {{"years", s.years()}, {"intervals_per_year", s.intervals_per_year()},
          {"values", encode(std::vector<double>(s.values().begin(), s.values().end()))}};
}

LoadSeries series(const Json& j) {
  return {j.at("years").get<int>(), j.at("intervals_per_year").get<int>(), decode(j.at("values"))};
}

Termination termination_from(const std::string& s) {
  for (auto t : {Termination::reduced_cost, Termination::stagnation, Termination::iteration_limit,
                 Termination::exact}) {
    if (s == to_string(t)) return t;
  }
  throw ValidationError(fmt::format("unknown termination '{}'", s));
}

std::string cell(double v) { return std::isnan(v) ? std::string() : fmt::format("{}", v); }

class CsvFile {
 public:
  explicit CsvFile(fs::path path) : path_(std::move(path)), out_(path_, std::ios::binary) {
    if (!out_) throw IoError(fmt::format("{}: cannot open for writing", path_.string()));
  }
  std::ofstream& operator*() { return out_; }
  void close() {
    if (!out_.flush()) throw IoError(fmt::format("{}: write failed", path_.string()));
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

void write_json(const Plan& plan, const fs::path& dir) {
  Json ders = Json::array();
  for (const auto& d : plan.ders) {
    ders.push_back({{"name", d.name},
                    {"capacity_unit", d.capacity_unit},
                    {"capacity", encode(d.capacity)},
                    {"investment_cost", encode(d.investment_cost)},
                    {"operating_cost", encode(d.operating_cost)},
                    {"investment_names", d.investment_names},
                    {"investment", encode(d.investment)},
                    {"operating", encode(d.operating)},
                    {"load", series(d.load)}});
  }
  Json iters = Json::array();
  for (const auto& r : plan.iterations) {
    iters.push_back({{"iteration", r.iteration},
                     {"master_objective", encode(r.master_objective)},
                     {"reduced_cost", encode(r.reduced_cost)},
                     {"delta", r.delta},
                     {"pool_size", r.pool_size},
                     {"lower_bound", encode(r.lower_bound)}});
  }
  Json j = {{"format_version", kExportVersion},
            {"engine", plan.engine},
            {"expansion_year", plan.expansion_year},
            {"objective", encode(plan.objective)},
            {"converged", plan.converged},
            {"termination", to_string(plan.termination)},
            {"bound_gap", encode(plan.bound_gap)},
            {"costs",
             {{"nwa_investment", encode(plan.costs.nwa_investment)},
              {"nwa_operation", encode(plan.costs.nwa_operation)},
              {"demand_charge", encode(plan.costs.demand_charge)},
              {"expansion", encode(plan.costs.expansion)}}},
            {"peaks", encode(plan.peaks)},
            {"year_objectives", encode(plan.year_objectives)},
            {"net_load", series(plan.net_load)},
            {"ders", ders},
            {"iterations", iters}};
  CsvFile f(dir / "plan.json");
  *f << j.dump(1) << '\n';
  f.close();
}

void write_csv(const Plan& plan, const fs::path& dir) {
  {
    CsvFile f(dir / "capacities.csv");
    *f << "der,unit,capacity,investment_cost,operating_cost\n";
    const std::pair<const char*, const char*> standard[] = {
        {"ee", "fraction"}, {"pv", "MW"}, {"dr", "MW"}, {"es", "MWh"}};
    for (auto [name, unit] : standard) {
      if (const auto* d = plan.find(name)) {
        *f << fmt::format("{},{},{},{},{}\n", d->name, d->capacity_unit, d->capacity,
                          d->investment_cost, d->operating_cost);
      } else {
        *f << fmt::format("{},{},0,0,0\n", name, unit);
      }
    }
    for (const auto& d : plan.ders) {
      if (d.name == "ee" || d.name == "pv" || d.name == "dr" || d.name == "es") continue;
      *f << fmt::format("{},{},{},{},{}\n", d.name, d.capacity_unit, d.capacity,
                        d.investment_cost, d.operating_cost);
    }
    f.close();
  }
  {
    CsvFile f(dir / "costs.csv");
    const auto& c = plan.costs;
    *f << "engine,expansion_year,nwa_investment,nwa_operation,demand_charge,expansion,total,"
          "objective\n";
    *f << fmt::format("{},{},{},{},{},{},{},{}\n", plan.engine, plan.expansion_year,
                      c.nwa_investment, c.nwa_operation, c.demand_charge, c.expansion, c.total(),
                      plan.objective);
    f.close();
  }
  {
    CsvFile f(dir / "peaks.csv");
    // row j: peak of year j (none for j = 0) and the objective with expansion at j
    *f << "year,peak_mw,objective_if_expanded\n";
    const std::size_t rows = std::max(plan.peaks.size() + 1, plan.year_objectives.size());
    for (std::size_t j = 0; j < rows; ++j) {
      const double peak = j >= 1 && j <= plan.peaks.size() ? plan.peaks[j - 1] : std::nan("");
      const double obj = j < plan.year_objectives.size() ? plan.year_objectives[j] : std::nan("");
      *f << fmt::format("{},{},{}\n", j, cell(peak), cell(obj));
    }
    f.close();
  }
  {
    CsvFile f(dir / "dispatch.csv");
    *f << "year,interval,base_load,net_load";
    for (const auto& d : plan.ders) *f << ',' << d.name << "_load";
    *f << '\n';
    const auto& net = plan.net_load;
    for (int a = 1; a <= net.years(); ++a) {
      for (int t = 0; t < net.intervals_per_year(); ++t) {
        double base = net.at(a, t);
        for (const auto& d : plan.ders) base -= d.load.at(a, t);
        *f << fmt::format("{},{},{},{}", a, t, base, net.at(a, t));
        for (const auto& d : plan.ders) *f << fmt::format(",{}", d.load.at(a, t));
        *f << '\n';
      }
    }
    f.close();
  }
  {
    CsvFile f(dir / "iterations.csv");
    *f << "iteration,master_objective,reduced_cost,delta,pool_size,lower_bound\n";
    for (const auto& r : plan.iterations) {
      *f << fmt::format("{},{},{},{},{},{}\n", r.iteration, r.master_objective, r.reduced_cost,
                        r.delta, r.pool_size, r.lower_bound);
    }
    f.close();
  }
}

}  // namespace

ExportFormat parse_format(std::string_view text) {
  if (text == "json") return ExportFormat::json;
  if (text == "csv") return ExportFormat::csv;
  throw ValidationError(fmt::format("format must be json or csv, got '{}'", text));
}

void export_plan(const Plan& plan, const fs::path& dir, ExportFormat format) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("{}: {}", dir.string(), ec.message()));
  if (format == ExportFormat::json) {
    write_json(plan, dir);
  } else {
    write_csv(plan, dir);
  }
}

Plan import_plan_json(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError(fmt::format("{}: cannot open for reading", file.string()));
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ValidationError(fmt::format("{}: {}", file.string(), e.what()));
  }
  try {
    if (j.at("format_version").get<int>() != kExportVersion) {
      throw ValidationError("unsupported format_version");
    }
    Plan p;
    p.engine = j.at("engine").get<std::string>();
    p.expansion_year = j.at("expansion_year").get<int>();
    p.objective = number(j.at("objective"));
    p.converged = j.at("converged").get<bool>();
    p.termination = termination_from(j.at("termination").get<std::string>());
    p.bound_gap = number(j.at("bound_gap"));
    const auto& c = j.at("costs");
    p.costs = {number(c.at("nwa_investment")), number(c.at("nwa_operation")),
               number(c.at("demand_charge")), number(c.at("expansion"))};
    p.peaks = decode(j.at("peaks"));
    p.year_objectives = decode(j.at("year_objectives"));
    p.net_load = series(j.at("net_load"));
    for (const auto& d : j.at("ders")) {
      DerResult r;
      r.name = d.at("name").get<std::string>();
      r.capacity_unit = d.at("capacity_unit").get<std::string>();
      r.capacity = number(d.at("capacity"));
      r.investment_cost = number(d.at("investment_cost"));
      r.operating_cost = number(d.at("operating_cost"));
      r.investment_names = d.at("investment_names").get<std::vector<std::string>>();
      r.investment = decode(d.at("investment"));
      r.operating = decode(d.at("operating"));
      r.load = series(d.at("load"));
      p.ders.push_back(std::move(r));
    }
    for (const auto& r : j.at("iterations")) {
      p.iterations.push_back({r.at("iteration").get<int>(), number(r.at("master_objective")),
                              number(r.at("reduced_cost")), r.at("delta").get<int>(),
                              r.at("pool_size").get<int>(), number(r.at("lower_bound"))});
    }
    return p;
  } catch (const Json::exception& e) {
    throw ValidationError(fmt::format("{}: {}", file.string(), e.what()));
  }
}

}  // namespace nwa::app
