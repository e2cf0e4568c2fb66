#pragma once

#include <exception>
#include <filesystem>
#include <iosfwd>

#include "beamblow/blowup.hpp"
#include "beamblow/bounds.hpp"
#include "beamblow/config.hpp"
#include "beamblow/dynamics.hpp"
#include "beamblow/scenarios.hpp"
#include "beamblow/spectra.hpp"

namespace beamblow {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitParseError = 2,
  kExitSolverFailure = 3,
  kExitConstructionFailure = 4,
  kExitInvalidArgument = 5,
  kExitConvergenceFailure = 6,
  kExitNumericalFailure = 7,
  kExitIoError = 8,
};

// Maps the library's exception types to exit codes; anything else is kExitCheckFailed.
int exit_code_for(const std::exception& e);

Grid grid_for(const RunConfig& config);

// Initial data for config.preset; high_energy uses energy_R (10 d when unset)
// and B from the growth chain, and fails if that chain is infeasible.
InitialData initial_data_for(const RunConfig& config, const Grid& grid,
                             const VariationalConstants& constants);

struct RunResult {
  Grid grid;
  VariationalConstants constants;
  InitialData data;
  Trajectory trajectory;
  BoundReport report;
};

// Constants, initial data, simulation, blow-up estimate and bound report,
// all in memory. Throws the library's exceptions on failure.
RunResult execute(const RunConfig& config);

// True when the run must be reported as a solver failure: the integrator
// gave up before the top threshold was crossed.
bool run_failed(const RunResult& result);

// execute() plus timeseries.csv, report.txt, u0.csv, u1.csv and meta.txt in
// out_dir. On failure whatever was produced is kept and a FAILED file holds
// the reason. Returns an ExitCode.
int run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace beamblow
