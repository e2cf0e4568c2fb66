#include "beamblow/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "beamblow/errors.hpp"
#include "beamblow/kernels.hpp"
#include "beamblow/linalg.hpp"

namespace beamblow {

namespace kp = kernels::parallel;

double dissipation_rate(const Grid& grid, const Field& v, const ModelParams& params) {
  return power_sum(grid, v, params.r + 1.0) + grad_norm_sq(grid, v);
}

double energy_scale(const Grid& grid, const Field& u, const Field& v, const ModelParams& params) {
  const Norms n = norms_of(grid, u, params);
  double kirchhoff_term = 0.0;
  if (params.beta != 0.0)
    kirchhoff_term = params.beta / (2.0 * (params.gamma + 1.0)) * std::pow(n.grad_sq, params.gamma + 1.0);
  return 0.5 * inner(grid, v, v) + 0.5 * n.grad_sq + 0.5 * n.lap_sq + kirchhoff_term +
         n.lp1_pow / (params.p + 1.0);
}

namespace {

double signed_pow(double x, double e) {
  if (x == 0.0) return 0.0;
  const double a = std::abs(x);
  const double m = e == 1.0 ? a : (e == 2.0 ? a * a : std::pow(a, e));
  return x > 0.0 ? m : -m;
}

double kirchhoff_at(const Grid& grid, const Field& u, const ModelParams& params,
                    std::vector<double>& lu) {
  apply_laplacian(grid, u.values(), lu);
  return kirchhoff(std::max(0.0, -grid.weight() * kp::dot(lu, u.values())), params);
}

// -|v|^{r-1} v + |u|^{p-1} u + (M(s) - m) L u into out; lu holds L u.
void explicit_part(const Field& u, const Field& v, const ModelParams& params, double excess,
                   std::span<const double> lu, std::span<double> out) {
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = excess * lu[k] - signed_pow(v[k], params.r) + signed_pow(u[k], params.p);
}

}  // namespace

State step(const Grid& grid, const State& state, const ModelParams& params, double dt,
           StepStats* stats, double stage_tolerance) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw SolverFailure("step size must be positive");
  require_match(grid, state.u);
  require_match(grid, state.v);
  const std::size_t n = grid.size();
  const double a = 0.25 * dt * dt;
  const double c = 0.5 * dt;

  // The Kirchhoff coefficient m = M(s^n) multiplies an implicit L u, and the
  // damping enters through its derivative D = r |v^n|^{r-1}; both are frozen
  // for the step, so each stage solves with the SPD matrix
  //   I + dt^2/4 (B - m L) - dt/2 L + dt/2 D.
  std::vector<double> lu(n);
  const double m = kirchhoff_at(grid, state.u, params, lu);
  std::vector<double> damping(n);
  for (std::size_t k = 0; k < n; ++k)
    damping[k] = params.r * std::pow(std::abs(state.v[k]), params.r - 1.0);

  const LinearOperator op = [&grid, &damping, a, c, m](std::span<const double> x, std::span<double> out) {
    std::vector<double> lx(x.size());
    apply_biharmonic(grid, x, out);
    apply_laplacian(grid, x, lx);
    for (std::size_t k = 0; k < x.size(); ++k)
      out[k] = x[k] + a * out[k] - (a * m + c) * lx[k] + c * damping[k] * x[k];
  };

  // Part of the right-hand side that does not depend on the stage:
  // v - dt K u - dt^2/4 K v + dt/2 L v with K = B - m L.
  std::vector<double> bu(n), bv(n), lv(n), base(n), n0(n), nstar(n), rhs(n);
  apply_biharmonic(grid, state.u.values(), bu);
  apply_biharmonic(grid, state.v.values(), bv);
  apply_laplacian(grid, state.v.values(), lv);
  for (std::size_t k = 0; k < n; ++k)
    base[k] = state.v[k] - dt * (bu[k] - m * lu[k]) - a * (bv[k] - m * lv[k]) + c * lv[k];
  explicit_part(state.u, state.v, params, 0.0, lu, n0);

  const CgOptions cg{stage_tolerance, 0, {}};
  int iterations = 0;
  State next;
  next.dt = state.dt;
  next.t = state.t + dt;
  next.v = state.v;
  next.u = Field(n);

  // `anchor` is the velocity the damping linearization is taken around.
  const auto solve_stage = [&](std::span<const double> nstar_part, const Field& anchor) {
    for (std::size_t k = 0; k < n; ++k)
      rhs[k] = base[k] + c * (n0[k] + nstar_part[k]) + c * damping[k] * anchor[k];
    try {
      iterations += conjugate_gradient(op, rhs, next.v.values(), cg).iterations;
    } catch (const ConvergenceFailure& e) {
      throw SolverFailure(std::string("stage solve failed: ") + e.what());
    }
    for (std::size_t k = 0; k < n; ++k) next.u[k] = state.u[k] + c * (state.v[k] + next.v[k]);
  };

  solve_stage(n0, state.v);
  const Field provisional_v = next.v;
  std::vector<double> lu_star(n);
  const double m_star = kirchhoff_at(grid, next.u, params, lu_star);
  explicit_part(next.u, provisional_v, params, m_star - m, lu_star, nstar);
  solve_stage(nstar, provisional_v);

  if (stats) stats->cg_iterations = iterations;
  if (!next.u.all_finite() || !next.v.all_finite())
    throw SolverFailure("non-finite state after step at t = " + std::to_string(state.t));
  return next;
}

void DtController::record(bool exceeded, const StepControls& controls) {
  if (exceeded) {
    scale *= 0.5;
    compliant = 0;
    return;
  }
  if (++compliant >= controls.grow_after) {
    scale = std::min(1.0, 2.0 * scale);
    compliant = 0;
  }
}

double adapt_dt(const Grid& grid, const State& state, const ModelParams& params,
                const StepControls& controls, const DtController& controller) {
  const double growth = std::pow(power_sum(grid, state.u, params.p + 1.0), (params.p - 1.0) / (params.p + 1.0)) +
                        std::pow(power_sum(grid, state.v, params.r + 1.0), (params.r - 1.0) / (params.r + 1.0));
  const double dt = controller.scale * controls.dt_max / (1.0 + controls.growth_c * growth);
  if (dt < controls.resolved_dt_min()) return dt;
  return std::min(dt, controls.dt_max);
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::time_limit: return "time_limit";
    case Termination::blowup_threshold: return "blowup_threshold";
    case Termination::solver_failure: return "solver_failure";
  }
  return "solver_failure";
}

namespace {

struct Observed {
  FunctionalSnapshot f;
  double dissipation = 0.0;
  double scale = 0.0;
};

Observed observe(const Grid& grid, const State& s, const ModelParams& params) {
  Observed o;
  o.f = snapshot(grid, s.u, s.v, params);
  o.dissipation = dissipation_rate(grid, s.v, params);
  o.scale = energy_scale(grid, s.u, s.v, params);
  return o;
}

}  // namespace

Trajectory simulate(const Grid& grid, const State& initial, const ModelParams& params,
                    const StopRule& stop, const StepControls& controls) {
  require_match(grid, initial.u);
  require_match(grid, initial.v);
  if (!initial.u.all_finite() || !initial.v.all_finite())
    throw InvalidArgument("initial state is not finite");
  if (!(stop.t_max > 0.0) || stop.output_every < 1 || !(stop.blow_threshold > 0.0))
    throw InvalidArgument("invalid stop rule");
  if (!(controls.dt_max > 0.0) || !(controls.resolved_dt_min() < controls.dt_max))
    throw InvalidArgument("need 0 < dt_min < dt_max");

  Trajectory traj;
  State state = initial;
  DtController controller;
  Observed now = observe(grid, state, params);
  double work = 0.0;

  const auto push = [&](double dt) {
    Snapshot s;
    s.t = state.t;
    s.dt = dt;
    s.f = now.f;
    s.dissipation_rate = now.dissipation;
    s.inner_uv = inner(grid, state.u, state.v);
    s.work = work;
    if (!traj.snapshots.empty()) {
      const Snapshot& prev = traj.snapshots.back();
      s.energy_residual = s.f.E - prev.f.E + (s.work - prev.work);
    }
    traj.snapshots.push_back(s);
  };

  state.dt = adapt_dt(grid, state, params, controls, controller);
  push(state.dt);
  long since_output = 0;
  double last_dt = state.dt;

  const auto finish = [&](Termination why) {
    traj.termination = why;
    if (since_output > 0) push(last_dt);
    traj.final_state = state;
    return traj;
  };

  while (true) {
    if (now.f.linf_u >= stop.blow_threshold) return finish(Termination::blowup_threshold);
    const double remaining = stop.t_max - state.t;
    // Summed steps drift by rounding; a remainder this small is the end.
    if (remaining <= 1e-6 * controls.dt_max) return finish(Termination::time_limit);

    double dt = adapt_dt(grid, state, params, controls, controller);
    if (dt < controls.resolved_dt_min()) {
      traj.failure_message = "step size fell below dt_min at t = " + std::to_string(state.t);
      return finish(Termination::solver_failure);
    }
    const bool last = dt >= remaining - 1e-6 * controls.dt_max;
    if (last) dt = remaining;

    State next;
    Observed after;
    try {
      StepStats stats;
      next = step(grid, state, params, dt, &stats);
      traj.cg_iterations += stats.cg_iterations;
      after = observe(grid, next, params);
    } catch (const SolverFailure& e) {
      controller.record(true, controls);
      ++traj.rejected_steps;
      if (adapt_dt(grid, state, params, controls, controller) < controls.resolved_dt_min()) {
        traj.failure_message = e.what();
        return finish(Termination::solver_failure);
      }
      continue;
    }
    const double dwork = 0.5 * dt * (now.dissipation + after.dissipation);
    const double residual = after.f.E - now.f.E + dwork;
    const double scale = std::max({1.0, now.scale, after.scale});
    const bool exceeded = !(std::abs(residual) <= controls.residual_target * scale);
    controller.record(exceeded, controls);
    if (exceeded) {
      ++traj.rejected_steps;
      continue;
    }

    if (last) next.t = stop.t_max;
    state = std::move(next);
    state.dt = dt;
    now = after;
    work += dwork;
    last_dt = dt;
    ++traj.steps;
    if (++since_output == stop.output_every) {
      push(dt);
      since_output = 0;
    }
  }
}

ResidualSeries energy_residual(const std::vector<Snapshot>& snapshots) {
  if (snapshots.size() < 2) throw InvalidArgument("energy residual needs two snapshots");
  ResidualSeries out;
  for (std::size_t k = 1; k < snapshots.size(); ++k) {
    const Snapshot& a = snapshots[k - 1];
    const Snapshot& b = snapshots[k];
    const double r = b.f.E - a.f.E + (b.work - a.work);
    const double nr = r / std::max(1.0, std::abs(a.f.E));
    out.residuals.push_back(r);
    out.normalized.push_back(nr);
    out.max_normalized = std::max(out.max_normalized, std::abs(nr));
  }
  return out;
}

}  // namespace beamblow
