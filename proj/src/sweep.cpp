#include "beamblow/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <sstream>
#include <thread>

#include "beamblow/errors.hpp"
#include "beamblow/io.hpp"
#include "beamblow/run.hpp"

namespace beamblow {

namespace {

std::string_view status_name(int code) {
  switch (code) {
    case kExitParseError: return "parse_error";
    case kExitSolverFailure: return "solver_failure";
    case kExitConstructionFailure: return "construction_failure";
    case kExitInvalidArgument: return "invalid_argument";
    case kExitConvergenceFailure: return "convergence_failure";
    case kExitNumericalFailure: return "numerical_failure";
    case kExitIoError: return "io_error";
    default: return "error";
  }
}

bool as_number(const std::string& s, double& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool value_less(const std::string& a, const std::string& b) {
  double x = 0.0;
  double y = 0.0;
  if (as_number(a, x) && as_number(b, y) && x != y) return x < y;
  return a < b;
}

bool row_less(const SweepRow& a, const SweepRow& b) {
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    if (value_less(a.values[k], b.values[k])) return true;
    if (value_less(b.values[k], a.values[k])) return false;
  }
  return false;
}

void run_cell(SweepRow& row) {
  try {
    validate(row.config);
    const RunResult result = execute(row.config);
    row.report = result.report;
    row.has_report = true;
    if (run_failed(result)) {
      row.status = status_name(kExitSolverFailure);
      row.message = result.trajectory.failure_message;
    } else {
      row.status = "ok";
    }
  } catch (const std::exception& e) {
    row.status = status_name(exit_code_for(e));
    row.message = e.what();
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + '"';
}

constexpr const char* kModelKeys[] = {"dim", "N", "p", "r", "gamma", "beta", "preset"};

std::string model_value(const RunConfig& c, std::string_view key) {
  if (key == "dim") return std::to_string(c.dim);
  if (key == "N") return std::to_string(c.N);
  if (key == "p") return format_double(c.p);
  if (key == "r") return format_double(c.r);
  if (key == "gamma") return format_double(c.gamma);
  if (key == "beta") return format_double(c.beta);
  return c.preset;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepConfig& config, int jobs) {
  if (jobs < 1) throw InvalidArgument("jobs must be at least 1");
  const std::size_t total = config.size();
  if (total > config.cap)
    throw InvalidArgument("sweep has " + std::to_string(total) + " cells, cap is " +
                          std::to_string(config.cap));

  std::vector<SweepRow> rows(total);
  for (std::size_t cell = 0; cell < total; ++cell) {
    SweepRow& row = rows[cell];
    row.config = config.base;
    std::size_t rest = cell;
    for (auto it = config.axes.rbegin(); it != config.axes.rend(); ++it) {
      const auto& values = it->second;
      row.values.insert(row.values.begin(), values[rest % values.size()]);
      rest /= values.size();
    }
    for (std::size_t k = 0; k < config.axes.size(); ++k)
      set_key(row.config, config.axes[k].first, row.values[k]);
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) run_cell(rows[k]);
  };
  const int threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), total));
  std::vector<std::thread> pool;
  for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::stable_sort(rows.begin(), rows.end(), row_less);
  return rows;
}

std::string sweep_table(const SweepConfig& config, const std::vector<SweepRow>& rows) {
  std::vector<std::string> model_keys;
  for (const char* key : kModelKeys) {
    const bool swept = std::any_of(config.axes.begin(), config.axes.end(),
                                   [&](const auto& axis) { return axis.first == key; });
    if (!swept) model_keys.emplace_back(key);
  }
  const std::string header = report_csv_header();
  const auto report_commas = static_cast<std::size_t>(std::count(header.begin(), header.end(), ','));

  std::ostringstream out;
  for (const auto& axis : config.axes) out << axis.first << ',';
  for (const std::string& key : model_keys) out << key << ',';
  out << "status,message," << header << '\n';
  for (const SweepRow& row : rows) {
    for (const std::string& v : row.values) out << csv_field(v) << ',';
    for (const std::string& key : model_keys) out << csv_field(model_value(row.config, key)) << ',';
    out << row.status << ',' << csv_field(row.message) << ',';
    if (row.has_report) {
      out << report_csv_row(row.report);
    } else {
      out << std::string(report_commas, ',');
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace beamblow
