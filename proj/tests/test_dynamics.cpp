#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "beamblow/blowup.hpp"
#include "beamblow/dynamics.hpp"
#include "beamblow/errors.hpp"
#include "beamblow/scenarios.hpp"
#include "support.hpp"

using namespace beamblow;
using std::numbers::pi;

namespace {

Field bump(const Grid& g, double a) {
  return g.sample([a](double x, double) { return a * std::pow(std::sin(pi * x), 2); });
}

State advance(const Grid& g, State s, const ModelParams& p, double dt, int steps) {
  for (int k = 0; k < steps; ++k) s = step(g, s, p, dt);
  return s;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("zero is an exact equilibrium") {
  const Grid g = make_grid(1, 1.0, 32);
  const State s = advance(g, State{0.0, g.zeros(), g.zeros(), 0.0}, ModelParams{}, 1e-3, 200);
  CHECK(s.u == g.zeros());
  CHECK(s.v == g.zeros());
  CHECK(s.t == doctest::Approx(0.2));

  StopRule stop;
  stop.t_max = 0.05;
  const Trajectory t = simulate(g, State{0.0, g.zeros(), g.zeros(), 0.0}, ModelParams{}, stop, {});
  CHECK(t.termination == Termination::time_limit);
  CHECK(t.final_state.t == doctest::Approx(0.05));
  for (const Snapshot& s : t.snapshots) CHECK(s.f.E == 0.0);
  const ResidualSeries r = energy_residual(t.snapshots);
  for (double x : r.residuals) CHECK(x == 0.0);
}

TEST_CASE("tiny data: energy decreases monotonically") {
  const Grid g = make_grid(1, 1.0, 64);
  const ModelParams p;
  State s{0.0, bump(g, 1e-8), g.zeros(), 0.0};
  double E = energy_E(g, s.u, s.v, p);
  int increases = 0;
  for (int k = 0; k < 1000; ++k) {
    s = step(g, s, p, 1e-4);
    const double next = energy_E(g, s.u, s.v, p);
    if (next > E) ++increases;
    E = next;
  }
  CHECK(increases == 0);
  CHECK(E < energy_E(g, bump(g, 1e-8), g.zeros(), p));
}

TEST_CASE("self-convergence order") {
  const Grid g = make_grid(1, 1.0, 64);
  ModelParams p;
  p.gamma = 0.5;
  const State init{0.0, bump(g, 2.0), g.sample([](double x, double) { return std::sin(2.0 * pi * x); }), 0.0};
  constexpr double T = 0.02, dt = 1e-3;
  const State ref = advance(g, init, p, dt / 64, 64 * 20);
  const auto error = [&](int refine) {
    const State s = advance(g, init, p, dt / refine, 20 * refine);
    Field du = s.u - ref.u, dv = s.v - ref.v;
    return std::sqrt(h_norm_sq(g, du) + inner(g, dv, dv));
  };
  const double e1 = error(1), e2 = error(2), e4 = error(4);
  CHECK(ref.t == doctest::Approx(T));
  CHECK(std::log2(e1 / e2) >= 1.8);
  CHECK(std::log2(e2 / e4) >= 1.8);
}

TEST_CASE("adapt_dt") {
  const Grid g = make_grid(1, 1.0, 32);
  const ModelParams p;
  StepControls c;
  DtController ctl;
  const State small{0.0, bump(g, 1e-3), g.zeros(), 0.0};
  CHECK(adapt_dt(g, small, p, c, ctl) == c.dt_max);

  c.growth_c = 1e-2;
  double prev = c.dt_max;
  for (double a : {1e1, 1e2, 1e3, 1e4, 1e6}) {
    const double dt = adapt_dt(g, State{0.0, bump(g, a), g.zeros(), 0.0}, p, c, ctl);
    CHECK(dt < prev);
    prev = dt;
  }

  const State mid{0.0, bump(g, 30.0), g.zeros(), 0.0};
  const double before = adapt_dt(g, mid, p, c, ctl);
  ctl.record(true, c);
  CHECK(adapt_dt(g, mid, p, c, ctl) == before / 2);
  for (int k = 0; k < c.grow_after - 1; ++k) ctl.record(false, c);
  CHECK(ctl.scale == 0.5);
  ctl.record(false, c);
  CHECK(ctl.scale == 1.0);
  ctl.record(false, c);
  CHECK(ctl.scale == 1.0);
}

TEST_CASE("blow-up run: snapshots ordered, energy law, threshold termination") {
  const Grid g = make_grid(1, 1.0, 64);
  ModelParams p;
  p.gamma = 0.5;
  const InitialData d = make_preset("negative_energy", g, p, {});
  StopRule stop;
  stop.blow_threshold = 1e6;
  const Trajectory t = simulate(g, State{0.0, d.u0, d.u1, 0.0}, p, stop, {});
  CHECK(t.termination == Termination::blowup_threshold);
  REQUIRE(t.snapshots.size() > 3);
  const ResidualSeries r = energy_residual(t.snapshots);
  for (std::size_t k = 1; k < t.snapshots.size(); ++k) {
    CHECK(t.snapshots[k].t > t.snapshots[k - 1].t);
    CHECK(t.snapshots[k].f.E <= t.snapshots[k - 1].f.E + std::abs(r.residuals[k - 1]));
  }
  CHECK(t.snapshots.back().f.linf_u >= 1e6);

  const Trajectory again = simulate(g, State{0.0, d.u0, d.u1, 0.0}, p, stop, {});
  REQUIRE(again.snapshots.size() == t.snapshots.size());
  CHECK(again.final_state.u == t.final_state.u);
  CHECK(again.final_state.v == t.final_state.v);
}

TEST_CASE("energy_residual needs two snapshots") {
  CHECK_THROWS_AS(energy_residual({}), InvalidArgument);
  CHECK_THROWS_AS(energy_residual(std::vector<Snapshot>(1)), InvalidArgument);
}

TEST_CASE("step rejects a non-finite state") {
  const Grid g = make_grid(1, 1.0, 8);
  Field u(8, 0.1);
  u[3] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(step(g, State{0.0, u, g.zeros(), 0.0}, ModelParams{}, 1e-3), SolverFailure);
}

}  // TEST_SUITE

TEST_SUITE("blowup") {

TEST_CASE("synthetic pole") {
  std::vector<double> t, norm;
  for (int k = 0; k <= 999; ++k) {
    t.push_back(k * 1e-3);
    norm.push_back(1.0 / (1.0 - t.back()));
  }
  const double thresholds[] = {2.0, 10.0, 100.0, 500.0};
  const BlowupEstimate e = detect_blowup(t, norm, thresholds);
  REQUIRE(e.detected);
  CHECK_FALSE(e.coarse);
  CHECK(std::abs(e.T_num - 1.0) <= 1e-3);
  CHECK(e.kappa == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(e.T_num >= e.crossings.back().t);
  for (std::size_t k = 1; k < e.crossings.size(); ++k) CHECK(e.crossings[k].t >= e.crossings[k - 1].t);
  CHECK(e.crossings[0].t == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("bounded series is not detected") {
  std::vector<double> t, norm;
  for (int k = 0; k < 100; ++k) {
    t.push_back(k * 0.1);
    norm.push_back(1.0 + std::sin(t.back()));
  }
  const double thresholds[] = {1e2, 1e4, 1e6};
  const BlowupEstimate e = detect_blowup(t, norm, thresholds);
  CHECK_FALSE(e.detected);
  CHECK(std::isnan(e.T_num));
}

TEST_CASE("short tail falls back to the last crossing") {
  const double t[] = {0.0, 0.5, 0.9};
  const double norm[] = {1.0, 1e3, 1e7};
  const double thresholds[] = {1e2, 1e4, 1e6};
  const BlowupEstimate e = detect_blowup(t, norm, thresholds);
  REQUIRE(e.detected);
  CHECK(e.coarse);
  CHECK(e.T_num == e.crossings.back().t);
}

TEST_CASE("argument checks") {
  const double t[] = {0.0, 1.0};
  const double norm[] = {1.0, 2.0};
  const double two[] = {1.0, 2.0};
  const double descending[] = {3.0, 2.0, 1.0};
  CHECK_THROWS_AS(detect_blowup(t, norm, two), InvalidArgument);
  CHECK_THROWS_AS(detect_blowup(t, norm, descending), InvalidArgument);
}

}  // TEST_SUITE
