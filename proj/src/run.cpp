#include "beamblow/run.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "beamblow/errors.hpp"
#include "beamblow/functionals.hpp"
#include "beamblow/io.hpp"

namespace beamblow {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return kExitParseError;
  if (dynamic_cast<const SolverFailure*>(&e)) return kExitSolverFailure;
  if (dynamic_cast<const ConstructionFailure*>(&e)) return kExitConstructionFailure;
  if (dynamic_cast<const InvalidArgument*>(&e)) return kExitInvalidArgument;
  if (dynamic_cast<const ConvergenceFailure*>(&e)) return kExitConvergenceFailure;
  if (dynamic_cast<const NumericalFailure*>(&e)) return kExitNumericalFailure;
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const std::ios_base::failure*>(&e) ||
      dynamic_cast<const std::filesystem::filesystem_error*>(&e))
    return kExitIoError;
  return kExitCheckFailed;
}

Grid grid_for(const RunConfig& config) { return make_grid(config.dim, config.extent, config.N); }

InitialData initial_data_for(const RunConfig& config, const Grid& grid,
                             const VariationalConstants& constants) {
  const ModelParams params = config.model();
  PresetOptions options;
  options.amplitude = config.amplitude;
  if (config.preset == "high_energy") {
    const Thm31Chain chain = thm31_constants(params, constants.poincare_B1);
    if (!chain.feasible)
      throw ConstructionFailure("high_energy needs the growth constant B: " + chain.reason);
    options.B = chain.B;
    options.energy_R = config.energy_R.value_or(10.0 * constants.well_depth_d);
  }
  return make_preset(config.preset, grid, params, options);
}

namespace {

void prepare(const RunConfig& config, RunResult& out) {
  validate(config);
  out.grid = grid_for(config);
  out.constants = compute_constants(out.grid, config.model(), config.embedding_options());
  out.data = initial_data_for(config, out.grid, out.constants);
}

void evolve(const RunConfig& config, RunResult& out) {
  const ModelParams params = config.model();
  State initial{0.0, out.data.u0, out.data.u1, 0.0};
  out.trajectory = simulate(out.grid, initial, params, config.stop_rule(), config.step_controls());
  const BlowupEstimate blowup = detect_blowup(out.trajectory, config.thresholds);
  out.report = full_report(out.grid, out.data.u0, out.data.u1, params, out.constants,
                           config.overrides(), blowup, out.trajectory.final_state.t);
}

}  // namespace

RunResult execute(const RunConfig& config) {
  RunResult out;
  prepare(config, out);
  evolve(config, out);
  return out;
}

bool run_failed(const RunResult& result) {
  return result.trajectory.termination == Termination::solver_failure &&
         !result.report.blowup.detected;
}

namespace {

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ostringstream text;
  writer(text);
  write_text_file(path, text.str());
}

void write_initial(const std::filesystem::path& dir, const RunResult& r) {
  write_file(dir / "u0.csv", [&](std::ostream& o) { write_field(o, r.grid, r.data.u0); });
  write_file(dir / "u1.csv", [&](std::ostream& o) { write_field(o, r.grid, r.data.u1); });
  write_file(dir / "meta.txt", [&](std::ostream& o) {
    write_initial_meta(o, r.data);
    write_constants(o, r.constants);
  });
}

void write_outputs(const std::filesystem::path& dir, const RunConfig& config,
                   const RunResult& r) {
  write_file(dir / "timeseries.csv", [&](std::ostream& o) { write_timeseries(o, r.trajectory); });
  write_file(dir / "report.txt", [&](std::ostream& o) {
    write_report(o, r.report);
    const Trajectory& tr = r.trajectory;
    o << "run.termination=" << to_string(tr.termination) << '\n';
    o << "run.steps=" << tr.steps << '\n';
    o << "run.rejected_steps=" << tr.rejected_steps << '\n';
    o << "run.cg_iterations=" << tr.cg_iterations << '\n';
    o << "run.initial_class=" << to_string(classify(r.grid, r.data.u0, config.model())) << '\n';
    if (tr.snapshots.size() >= 2)
      o << "run.max_energy_residual=" << format_double(energy_residual(tr.snapshots).max_normalized)
        << '\n';
  });
}

void mark_failed(const std::filesystem::path& dir, const std::string& reason) {
  try {
    write_text_file(dir / "FAILED", reason + "\n");
  } catch (const std::exception&) {
  }
}

}  // namespace

int run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log) {
  try {
    std::filesystem::create_directories(out_dir);
    std::filesystem::remove(out_dir / "FAILED");
    write_text_file(out_dir / "config.txt", serialize(config));
    RunResult result;
    prepare(config, result);
    write_initial(out_dir, result);
    evolve(config, result);
    write_outputs(out_dir, config, result);
    const BlowupEstimate& b = result.report.blowup;
    log << "termination=" << to_string(result.trajectory.termination)
        << " t_end=" << format_double(result.trajectory.final_state.t)
        << " blowup=" << (b.detected ? "yes" : "no");
    if (b.detected) log << " T_num=" << format_double(b.T_num);
    log << " T_lower=" << format_double(result.report.T_lower)
        << " T_upper=" << format_double(result.report.T_upper)
        << " sandwich_ok=" << (result.report.sandwich_ok ? "true" : "false") << '\n';
    if (run_failed(result)) {
      mark_failed(out_dir, "solver_failure: " + result.trajectory.failure_message);
      return kExitSolverFailure;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    mark_failed(out_dir, e.what());
    log << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace beamblow
