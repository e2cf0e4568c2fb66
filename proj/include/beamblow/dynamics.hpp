#pragma once

// Time integration of the semi-discrete beam system
//   u' = v,  v' = -B u + L v + N(u, v),
//   N(u, v) = M(||grad u||^2) L u - |v|^{r-1} v + |u|^{p-1} u.
//
// Crank-Nicolson in the linear part, with the Kirchhoff coefficient frozen at
// the current state in front of an implicit L u and the damping linearized
// about the current velocity. The remaining explicit terms follow Heun's
// predictor-corrector: lagged, then re-evaluated once at the provisional
// state. Each stage is one SPD solve with
//   I + dt^2/4 (B - M(s^n) L) - dt/2 L + dt/2 diag(r |v^n|^{r-1}).

#include <string>
#include <string_view>
#include <vector>

#include "beamblow/functionals.hpp"
#include "beamblow/mesh.hpp"
#include "beamblow/params.hpp"

namespace beamblow {

struct State {
  double t = 0.0;
  Field u;
  Field v;
  double dt = 0.0;
};

// ||v||_{r+1}^{r+1} + ||grad v||^2, the rate at which E decreases.
double dissipation_rate(const Grid& grid, const Field& v, const ModelParams& params);

// Sum of the magnitudes of the energy terms; the scale rounding errors in E live on.
double energy_scale(const Grid& grid, const Field& u, const Field& v, const ModelParams& params);

struct StepStats {
  int cg_iterations = 0;
};

inline constexpr double kStageTolerance = 1e-10;

// One step of size dt from `state`; the returned state has t + dt and keeps
// state.dt. Throws SolverFailure on inner-solve failure or non-finite output.
State step(const Grid& grid, const State& state, const ModelParams& params, double dt,
           StepStats* stats = nullptr, double stage_tolerance = kStageTolerance);

struct StepControls {
  double dt_max = 1e-4;
  // 0 selects 1e-12 * dt_max.
  double dt_min = 0.0;
  // Per-step energy-law residual, relative to energy_scale, above which a
  // step is rejected and retried with half the step.
  double residual_target = 1e-6;
  int grow_after = 20;
  // c in dt_max / (1 + c (||u||_{p+1}^{p-1} + ||v||_{r+1}^{r-1})).
  double growth_c = 1e-14;

  double resolved_dt_min() const { return dt_min > 0.0 ? dt_min : 1e-12 * dt_max; }
};

struct DtController {
  double scale = 1.0;
  int compliant = 0;

  // Halves the scale on an exceedance; doubles it, capped at 1, after
  // `grow_after` compliant steps in a row.
  void record(bool exceeded, const StepControls& controls);
};

// clamp(scale * dt_max / (1 + c (...)), dt_min, dt_max). Returns a value below
// dt_min (unclamped) when the controller has pushed the step under it; the
// caller treats that as a solver failure.
double adapt_dt(const Grid& grid, const State& state, const ModelParams& params,
                const StepControls& controls, const DtController& controller);

enum class Termination { time_limit, blowup_threshold, solver_failure };
std::string_view to_string(Termination t);

struct Snapshot {
  double t = 0.0;
  double dt = 0.0;
  FunctionalSnapshot f;
  double dissipation_rate = 0.0;
  // (u, v)
  double inner_uv = 0.0;
  // Cumulative dissipated work, composite trapezoid over accepted steps.
  double work = 0.0;
  // E_k - E_{k-1} + (work_k - work_{k-1}); 0 for the first snapshot.
  double energy_residual = 0.0;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  Termination termination = Termination::time_limit;
  std::string failure_message;
  State final_state;
  long steps = 0;
  long rejected_steps = 0;
  long cg_iterations = 0;
};

struct StopRule {
  double t_max = 10.0;
  // Stop once ||u||_inf reaches this.
  double blow_threshold = 1e10;
  int output_every = 50;
};

// Runs step/adapt_dt from `initial` (initial.dt is ignored) until a stop
// condition. Solver failures end the run with termination solver_failure and
// the last accepted state kept in final_state.
Trajectory simulate(const Grid& grid, const State& initial, const ModelParams& params,
                    const StopRule& stop, const StepControls& controls);

struct ResidualSeries {
  std::vector<double> residuals;    // r_k for k = 1 .. n-1
  std::vector<double> normalized;   // r_k / max(1, |E_{k-1}|)
  double max_normalized = 0.0;
};

// Residuals between consecutive snapshots from their energies and cumulative
// work. Throws InvalidArgument with fewer than two snapshots.
ResidualSeries energy_residual(const std::vector<Snapshot>& snapshots);

}  // namespace beamblow
