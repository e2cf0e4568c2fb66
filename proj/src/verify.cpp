#include "beamblow/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

#include "beamblow/bounds.hpp"
#include "beamblow/config.hpp"
#include "beamblow/dynamics.hpp"
#include "beamblow/functionals.hpp"
#include "beamblow/mesh.hpp"
#include "beamblow/run.hpp"
#include "beamblow/scenarios.hpp"
#include "beamblow/spectra.hpp"

namespace beamblow {

namespace {

using Clock = std::chrono::steady_clock;

class Suite {
 public:
  explicit Suite(std::string name) : start_(Clock::now()) { result_.name = std::move(name); }

  void check(bool ok, const std::string& what) {
    result_.lines.push_back((ok ? "PASS " : "FAIL ") + what);
    if (!ok) result_.passed = false;
  }

  // Runs `body`, turning an escaping exception into a failed check.
  template <class F>
  SuiteResult run(F&& body) {
    try {
      body(*this);
    } catch (const std::exception& e) {
      check(false, std::string("exception: ") + e.what());
    }
    result_.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    return result_;
  }

 private:
  SuiteResult result_;
  Clock::time_point start_;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

// ---- Green identities: operator forms against edge and cell sums ----

double at(const Grid& g, const Field& u, int i, int j) {
  const int rows = g.dim() == 2 ? g.n_interior(1) : 1;
  if (i < 0 || j < 0 || i >= g.n_interior(0) || j >= rows) return 0.0;
  return u[static_cast<std::size_t>(i) + static_cast<std::size_t>(g.n_interior(0)) * j];
}

double grad_oracle(const Grid& g, const Field& u) {
  const int nx = g.n_interior(0);
  const int ny = g.dim() == 2 ? g.n_interior(1) : 1;
  const double hx = g.spacing(0);
  double sum = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = -1; i < nx; ++i) {
      const double d = (at(g, u, i + 1, j) - at(g, u, i, j)) / hx;
      sum += d * d;
    }
  if (g.dim() == 2) {
    const double hy = g.spacing(1);
    for (int j = -1; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double d = (at(g, u, i, j + 1) - at(g, u, i, j)) / hy;
        sum += d * d;
      }
  }
  return g.weight() * sum;
}

// Second differences at interior nodes, plus the clamped boundary term
// 2 (u_first^2 + u_last^2) / h^4 per grid line, plus 2 |D+x D+y u|^2 over cells.
double lap_oracle(const Grid& g, const Field& u) {
  const int nx = g.n_interior(0);
  const int ny = g.dim() == 2 ? g.n_interior(1) : 1;
  const double hx2 = g.spacing(0) * g.spacing(0);
  double sum = 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double d = (at(g, u, i - 1, j) - 2.0 * at(g, u, i, j) + at(g, u, i + 1, j)) / hx2;
      sum += d * d;
    }
    const double a = at(g, u, 0, j), b = at(g, u, nx - 1, j);
    sum += 2.0 * (a * a + b * b) / (hx2 * hx2);
  }
  if (g.dim() == 2) {
    const double hy2 = g.spacing(1) * g.spacing(1);
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        const double d = (at(g, u, i, j - 1) - 2.0 * at(g, u, i, j) + at(g, u, i, j + 1)) / hy2;
        sum += d * d;
      }
      const double a = at(g, u, i, 0), b = at(g, u, i, ny - 1);
      sum += 2.0 * (a * a + b * b) / (hy2 * hy2);
    }
    const double hxy = g.spacing(0) * g.spacing(1);
    for (int j = -1; j < ny; ++j)
      for (int i = -1; i < nx; ++i) {
        const double d = (at(g, u, i + 1, j + 1) - at(g, u, i, j + 1) - at(g, u, i + 1, j) +
                          at(g, u, i, j)) /
                         hxy;
        sum += 2.0 * d * d;
      }
  }
  return g.weight() * sum;
}

Field random_field(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Field u(g.size());
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = unit(rng);
  return u;
}

void green_case(Suite& s, const Grid& g, std::mt19937_64& rng, bool corrupt, const std::string& label) {
  constexpr int kFields = 100;
  constexpr double kTol = 1e-13;
  const double h4 = std::pow(g.spacing(0), 4);
  const auto bih = [&](const Field& u) {
    Field out = biharmonic_clamped(g, u);
    if (corrupt)
      for (std::size_t k = 0; k < u.size(); ++k) out[k] += 1e-8 * 6.0 / h4 * u[k];
    return out;
  };
  double worst_grad = 0.0, worst_lap = 0.0, worst_sym = 0.0;
  for (int n = 0; n < kFields; ++n) {
    const Field u = random_field(g, rng);
    const Field w = random_field(g, rng);
    worst_grad = std::max(worst_grad, rel(grad_norm_sq(g, u), grad_oracle(g, u)));
    worst_lap = std::max(worst_lap, rel(inner(g, bih(u), u), lap_oracle(g, u)));
    // Relative to the Cauchy-Schwarz bound, since (Au, w) itself may cancel.
    const auto asym = [&](const Field& au, const Field& aw) {
      const double bound = norm_lq(g, au, 2.0) * norm_lq(g, w, 2.0) + norm_lq(g, u, 2.0) * norm_lq(g, aw, 2.0);
      return std::abs(inner(g, au, w) - inner(g, u, aw)) / bound;
    };
    worst_sym = std::max({worst_sym, asym(bih(u), bih(w)),
                          asym(laplacian_dirichlet(g, u), laplacian_dirichlet(g, w))});
  }
  s.check(worst_grad <= kTol, label + " (-Lu,u) vs edge sum, max rel " + num(worst_grad));
  s.check(worst_lap <= kTol, label + " (Bu,u) vs second-difference sum, max rel " + num(worst_lap));
  s.check(worst_sym <= kTol, label + " operator symmetry, max rel " + num(worst_sym));
}

// ---- helpers for dynamics-based suites ----

RunConfig sine_bump_config(double dt_max, int output_every) {
  RunConfig c;
  c.preset = "sine_bump";
  c.N = 128;
  c.t_max = 0.5;
  c.dt_max = dt_max;
  c.output_every = output_every;
  return c;
}

double max_residual(const RunConfig& c) {
  const Grid g = grid_for(c);
  const InitialData data = make_preset(c.preset, g, c.model(), {});
  const Trajectory t = simulate(g, State{0.0, data.u0, data.u1, 0.0}, c.model(), c.stop_rule(), c.step_controls());
  return energy_residual(t.snapshots).max_normalized;
}

}  // namespace

SuiteResult green_identity_suite(const VerifyOptions& options) {
  return Suite("green_identity").run([&](Suite& s) {
    std::mt19937_64 rng(options.seed);
    green_case(s, make_grid(1, 1.0, 64), rng, options.corrupt_stencil, "1D N=64");
    green_case(s, make_grid(2, 1.0, 16), rng, options.corrupt_stencil, "2D 16x16");
  });
}

SuiteResult eigenvalue_benchmark_suite(const VerifyOptions&) {
  return Suite("eigenvalue_benchmark").run([](Suite& s) {
    // First root of cos k cosh k = 1.
    constexpr double kRoot = 4.730040744862704;
    const double exact = std::pow(kRoot, 4);
    double err[3];
    const int sizes[3] = {64, 128, 256};
    for (int k = 0; k < 3; ++k) {
      const EigenPair e = smallest_eigen(make_grid(1, 1.0, sizes[k]), SpdOperator::clamped_biharmonic);
      err[k] = std::abs(e.value - exact);
      if (sizes[k] == 256)
        s.check(err[k] / exact <= 5e-3, "clamped lambda1 N=256 " + num(e.value) + " vs " + num(exact));
    }
    for (int k = 0; k < 2; ++k) {
      const double order = std::log2(err[k] / err[k + 1]);
      s.check(std::abs(order - 2.0) <= 0.3, "convergence order N=" + std::to_string(sizes[k]) + "->" +
                                                  std::to_string(sizes[k + 1]) + " " + num(order));
    }
    const EigenPair small = smallest_eigen(make_grid(1, 1.0, 32), SpdOperator::clamped_biharmonic);
    s.check(small.residual <= 1e-8, "eigen residual N=32 " + num(small.residual));
    const Grid g = make_grid(1, 1.0, 256);
    const double h = g.spacing(0);
    const double discrete = 4.0 / (h * h) * std::pow(std::sin(std::numbers::pi * h / 2.0), 2);
    const EigenPair lap = smallest_eigen(g, SpdOperator::dirichlet_laplacian);
    s.check(rel(lap.value, discrete) <= 1e-9, "Dirichlet lambda1 N=256 " + num(lap.value) +
                                                  " vs closed form " + num(discrete));
    s.check(lap.residual <= 1e-8, "Dirichlet eigen residual N=256 " + num(lap.residual));
  });
}

SuiteResult energy_residual_order_suite(const VerifyOptions&) {
  return Suite("energy_residual_order").run([](Suite& s) {
    const double coarse = max_residual(sine_bump_config(1e-4, 50));
    const double fine = max_residual(sine_bump_config(5e-5, 100));
    s.check(coarse <= 1e-4, "max normalized residual at dt 1e-4: " + num(coarse));
    const double ratio = coarse / fine;
    s.check(std::abs(ratio - 4.0) <= 1.0, "residual ratio dt -> dt/2: " + num(ratio));
  });
}

namespace {

struct Lemma21Tally {
  int above_d = 0;
  int inconsistent = 0;
  int negative = 0;
  int positive = 0;
};

// Scales u along its fiber lambda u so that J <= d: below the first level
// crossing, around the fiber maximum when it stays under d, or past the
// second crossing when J eventually falls below d again.
double fiber_scale(const Norms& base, const ModelParams& params, double d, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto scaled = [&](double lam) {
    Norms m = base;
    m.l2_sq *= lam * lam;
    m.grad_sq *= lam * lam;
    m.lap_sq *= lam * lam;
    m.lp1_pow *= std::pow(lam, params.p + 1.0);
    return m;
  };
  const auto J = [&](double lam) { return potential_J(scaled(lam), params); };
  const auto I = [&](double lam) { return nehari_I(scaled(lam), params); };
  const auto bisect = [](double lo, double hi, auto&& stays_low) {
    for (int k = 0; k < 200; ++k) {
      const double mid = std::sqrt(lo * hi);
      (stays_low(mid) ? lo : hi) = mid;
    }
    return lo;
  };
  constexpr double kLo = 1e-12, kHi = 1e12;
  const bool has_peak = I(kHi) < 0.0;
  if (!has_peak) return bisect(kLo, kHi, [&](double l) { return J(l) <= d; }) * (0.5 + 0.5 * unit(rng));
  const double peak = bisect(kLo, kHi, [&](double l) { return I(l) > 0.0; });
  if (J(peak) <= d) return peak * std::exp(2.0 * unit(rng) - 1.0);
  if ((n / 2) % 2 == 0) return bisect(kLo, peak, [&](double l) { return J(l) <= d; }) * (0.5 + 0.5 * unit(rng));
  return bisect(peak, kHi, [&](double l) { return J(l) > d; }) * (1.0 + 1e-6 + unit(rng));
}

Lemma21Tally lemma21_sample(const ModelParams& params, int fields, std::uint64_t seed) {
  const Grid g = make_grid(1, 1.0, 128);
  EmbeddingOptions eo;
  eo.seed = seed;
  const VariationalConstants c = compute_constants(g, params, eo);
  std::mt19937_64 rng(seed + 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Lemma21Tally tally;
  for (int n = 0; n < fields; ++n) {
    Field u(g.size());
    if (n % 2 == 0) {
      for (int k = 1; k <= 6; ++k) {
        const double a = (2.0 * unit(rng) - 1.0) / k;
        for (std::size_t i = 0; i < u.size(); ++i)
          u[i] += a * std::sin(k * std::numbers::pi * g.coordinate(0, static_cast<int>(i)));
      }
    } else {
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = 2.0 * unit(rng) - 1.0;
    }
    const double lam = fiber_scale(norms_of(g, u, params), params, c.well_depth_d, n, rng);
    const Lemma21Verdict v = lemma21_verdict(g, lam * u, params, c);
    if (!v.J_le_d) ++tally.above_d;
    if (!v.consistent) ++tally.inconsistent;
    (v.I_neg ? tally.negative : tally.positive)++;
  }
  return tally;
}

}  // namespace

SuiteResult lemma21_suite(const VerifyOptions& options) {
  return Suite("lemma21").run([&](Suite& s) {
    constexpr int kFields = 1000;
    ModelParams half;
    half.gamma = 0.5;
    for (const ModelParams& params : {ModelParams{}, half}) {
      const Lemma21Tally t = lemma21_sample(params, kFields, options.seed);
      const std::string label = "gamma " + num(params.gamma) + ": ";
      s.check(t.above_d == 0, label + "fields with J <= d " + std::to_string(kFields - t.above_d) + "/" +
                                  std::to_string(kFields));
      s.check(t.inconsistent == 0, label + "inconsistencies " + std::to_string(t.inconsistent) + " (" +
                                       std::to_string(t.negative) + " with I < 0)");
      // With p = 2 gamma + 1 and beta = 1 the Kirchhoff term keeps I > 0 in 1D.
      if (params.gamma == 0.5)
        s.check(t.negative > 0 && t.positive > 0, label + "both signs of I sampled");
    }
  });
}

SuiteResult chain_consistency_suite(const VerifyOptions&) {
  return Suite("chain_consistency").run([](Suite& s) {
    {
      ModelParams params;
      params.r = 1.0;
      const double B1 = 1.0 / std::numbers::pi;
      const Thm31Chain c = thm31_constants(params, B1);
      const double pi2 = std::numbers::pi * std::numbers::pi;
      // Root of 64 e^2 + 6 pi^2 e - 12 pi^2 = 0.
      const double delta3 = (-6.0 * pi2 + std::sqrt(36.0 * pi2 * pi2 + 4.0 * 64.0 * 12.0 * pi2)) / 128.0;
      s.check(c.feasible && std::abs(c.delta3 - delta3) <= 1e-6,
              "delta3 (p=3, r=1, B1=1/pi) " + num(c.delta3) + " vs " + num(delta3));
      s.check(std::abs(c.B - 1.0 / delta3) <= 1e-6, "B " + num(c.B) + " vs " + num(1.0 / delta3));
      const double b_small = thm31_B(params, B1, 1e-6);
      s.check(rel(b_small, c.B_limit) <= 1e-3, "B(1e-6) " + num(b_small) + " vs limit " + num(c.B_limit));
    }
    int feasible = 0, bad = 0;
    for (double p : {3.0, 4.0, 5.0, 7.0})
      for (double r : {1.0, 1.5, 2.0, 2.5})
        for (double gamma : {0.0, 0.5, 1.0})
          for (double B1 : {0.05, 1.0 / std::numbers::pi, 1.0}) {
            ModelParams params{p, r, gamma, 1.0, 1};
            if (!(r < p) || 2.0 * gamma + 1.0 > p) continue;
            const Thm31Chain c = thm31_constants(params, B1);
            if (!c.feasible) continue;
            ++feasible;
            const bool ok = c.eps0 > 0.0 && c.eps0 <= c.delta3 && c.delta3 <= c.delta2 &&
                            c.delta2 <= c.delta1 && c.delta1 <= c.delta0 && c.g_eps0 > 0.0 &&
                            c.h_eps0 > 0.0 && c.A > 0.0 && c.B_eps0 <= c.B;
            if (!ok) ++bad;
          }
    s.check(feasible > 0 && bad == 0, "growth chains ordered and positive: " + std::to_string(feasible - bad) +
                                          "/" + std::to_string(feasible));
    const TailIntegral t = thm34_integral(1.0, 0.0, 0.25, 3.0);
    s.check(std::abs(t.with_tail - 0.5 * std::log(5.0)) <= 1e-8,
            "quadrature oracle " + num(t.with_tail) + " vs 0.5 ln 5");
    s.check(t.truncated <= t.with_tail, "truncated integral below tail-corrected");
  });
}

SuiteResult sandwich_suite(const VerifyOptions& options) {
  return Suite("sandwich").run([&](Suite& s) {
    for (const char* preset : {"negative_energy", "high_energy"}) {
      RunConfig c;
      c.preset = preset;
      c.gamma = 0.5;
      c.seed = options.seed;
      const RunResult r = execute(c);
      const BoundReport& b = r.report;
      const std::string label = std::string(preset) + " (gamma 0.5): ";
      s.check(b.blowup.detected, label + "blow-up detected, T_num " + num(b.blowup.T_num));
      s.check(b.sandwich_ok, label + num(b.T_lower) + " <= " + num(b.blowup.T_num) + " <= " + num(b.T_upper));
    }
  });
}

std::vector<SuiteResult> verify(const VerifyOptions& options, std::ostream* progress) {
  using SuiteFn = SuiteResult (*)(const VerifyOptions&);
  constexpr SuiteFn kSuites[] = {green_identity_suite,   eigenvalue_benchmark_suite, energy_residual_order_suite,
                                 lemma21_suite,          chain_consistency_suite,    sandwich_suite};
  std::vector<SuiteResult> out;
  for (SuiteFn fn : kSuites) {
    out.push_back(fn(options));
    if (progress) {
      const SuiteResult& r = out.back();
      *progress << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << num(r.seconds) << " s)\n";
      for (const std::string& line : r.lines) *progress << "  " << line << '\n';
    }
  }
  return out;
}

}  // namespace beamblow
