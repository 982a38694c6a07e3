#pragma once

#include <filesystem>
#include <string_view>

#include "nwa/dw/problem.hpp"

namespace nwa::app {

enum class ExportFormat { json, csv };

/// "json" or "csv"; throws ValidationError otherwise.
ExportFormat parse_format(std::string_view text);

inline constexpr int kExportVersion = 1;

/// Writes into directory `dir` (created if needed). json: plan.json with
/// the whole plan, schedules and iteration log. csv: capacities.csv,
/// costs.csv, peaks.csv, dispatch.csv and iterations.csv. Numbers use the
/// shortest decimal form that reads back to the same double, so output is
/// byte-for-byte deterministic. Throws IoError with the path on failure.
void export_plan(const Plan& plan, const std::filesystem::path& dir, ExportFormat format);

/// Reads plan.json back (the file itself, not the directory).
Plan import_plan_json(const std::filesystem::path& file);

}  // namespace nwa::app
