#pragma once

#include <string>
#include <utility>
#include <vector>

#include "beamblow/bounds.hpp"
#include "beamblow/config.hpp"

namespace beamblow {

struct SweepRow {
  // One value per axis, in axis order.
  std::vector<std::string> values;
  RunConfig config;
  // "ok" or the failure class, e.g. "solver_failure".
  std::string status;
  std::string message;
  bool has_report = false;
  BoundReport report;
};

// Every cell of the cartesian product, run on up to `jobs` threads. Rows are
// ordered by their axis values compared left to right, numerically where both
// values parse as numbers. A failing cell is recorded in its row.
std::vector<SweepRow> sweep(const SweepConfig& config, int jobs);

// CSV with the axis columns, the model columns not already swept, status,
// message and the bound summary.
std::string sweep_table(const SweepConfig& config, const std::vector<SweepRow>& rows);

}  // namespace beamblow
