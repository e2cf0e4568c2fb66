#include "beamblow/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "beamblow/config.hpp"
#include "beamblow/errors.hpp"

namespace beamblow {

namespace {

std::string b(bool v) { return v ? "true" : "false"; }

class KeyValue {
 public:
  explicit KeyValue(std::ostream& out) : out_(out) {}
  void operator()(const std::string& key, double v) { out_ << key << '=' << format_double(v) << '\n'; }
  void operator()(const std::string& key, bool v) { out_ << key << '=' << b(v) << '\n'; }
  void operator()(const std::string& key, int v) { out_ << key << '=' << v << '\n'; }
  void operator()(const std::string& key, std::string_view v) { out_ << key << '=' << v << '\n'; }

 private:
  std::ostream& out_;
};

}  // namespace

void write_timeseries(std::ostream& out, const Trajectory& trajectory) {
  out << kTimeseriesHeader << '\n';
  for (const Snapshot& s : trajectory.snapshots) {
    const double vals[] = {s.t,        s.dt,       s.f.E,      s.f.J,         s.f.I,
                           s.f.l2_u,   s.f.lp1_u,  s.f.linf_u, s.f.l2_v,      s.f.grad_u_sq,
                           s.f.lap_u_sq, s.dissipation_rate, s.energy_residual};
    bool first = true;
    for (double v : vals) {
      if (!first) out << ',';
      out << format_double(v);
      first = false;
    }
    out << '\n';
  }
}

void write_field(std::ostream& out, const Grid& grid, const Field& field) {
  require_match(grid, field);
  const int nx = grid.n_interior(0);
  if (grid.dim() == 1) {
    out << "x,value\n";
    for (int i = 0; i < nx; ++i)
      out << format_double(grid.coordinate(0, i)) << ',' << format_double(field[static_cast<std::size_t>(i)]) << '\n';
    return;
  }
  out << "x,y,value\n";
  for (int j = 0; j < grid.n_interior(1); ++j)
    for (int i = 0; i < nx; ++i)
      out << format_double(grid.coordinate(0, i)) << ',' << format_double(grid.coordinate(1, j)) << ','
          << format_double(field[static_cast<std::size_t>(i) + static_cast<std::size_t>(nx) * j]) << '\n';
}

void write_constants(std::ostream& out, const VariationalConstants& c) {
  KeyValue kv(out);
  kv("lambda1", c.lambda1);
  kv("lambda_laplace", c.lambda_laplace);
  kv("poincare_B1", c.poincare_B1);
  kv("embed_C", c.embed_C);
  kv("embed_Bstar", c.embed_Bstar);
  kv("embed_Ca", c.embed_Ca);
  kv("embed_Cb", c.embed_Cb);
  kv("well_depth_d", c.well_depth_d);
  kv("lambda_star", c.lambda_star);
  kv("well_depth_mountain_pass", c.well_depth_mountain_pass);
}

void write_initial_meta(std::ostream& out, const InitialData& d) {
  KeyValue kv(out);
  kv("preset", std::string_view(d.preset));
  kv("amplitude", d.amplitude);
  kv("r1", d.r1);
  kv("r2", d.r2);
  kv("chi", d.chi);
  kv("target_R", d.target_R);
}

void write_report(std::ostream& out, const BoundReport& r) {
  KeyValue kv(out);
  const ModelParams& m = r.params;
  kv("p", m.p);
  kv("r", m.r);
  kv("gamma", m.gamma);
  kv("beta", m.beta);
  kv("dim", m.dim);
  write_constants(out, r.constants);
  kv("E0", r.E0);
  kv("inner_u0_u1", r.inner_u0_u1);

  const Thm31Chain& a = r.thm31;
  kv("thm31.feasible", a.feasible);
  kv("thm31.reason", std::string_view(a.reason.empty() ? "-" : a.reason));
  kv("thm31.s", a.s);
  kv("thm31.delta0", a.delta0);
  kv("thm31.delta1", a.delta1);
  kv("thm31.delta2", a.delta2);
  kv("thm31.delta3", a.delta3);
  kv("thm31.eps0", a.eps0);
  kv("thm31.theta_eps0", a.theta_eps0);
  kv("thm31.g_eps0", a.g_eps0);
  kv("thm31.h_eps0", a.h_eps0);
  kv("thm31.B_eps0", a.B_eps0);
  kv("thm31.A", a.A);
  kv("thm31.B", a.B);
  kv("thm31.B_limit", a.B_limit);
  kv("thm31.verdict", to_string(r.thm31_verdict));

  const Thm32Chain& c2 = r.thm32;
  kv("thm32.status", to_string(c2.status));
  kv("thm32.reason", std::string_view(c2.reason.empty() ? "-" : c2.reason));
  kv("thm32.alpha", c2.alpha);
  kv("thm32.mu", c2.mu);
  kv("thm32.M", c2.M);
  kv("thm32.mu0", c2.mu0);
  kv("thm32.zeta", c2.zeta);
  kv("thm32.eps", c2.eps);
  kv("thm32.C1", c2.C1);
  kv("thm32.s0", c2.s0);
  kv("thm32.C2", c2.C2);
  kv("thm32.mu1", c2.mu1);
  kv("thm32.mu2", c2.mu2);
  kv("thm32.mu2_as_printed", c2.mu2_as_printed);
  kv("thm32.L0", c2.L0);
  kv("thm32.cond316_lhs", c2.cond316_lhs);
  kv("thm32.cond316_rhs", c2.cond316_rhs);
  kv("thm32.cond316", c2.cond316);
  kv("thm32.T_upper", c2.T_upper);
  kv("thm32.T_upper_as_printed", c2.T_upper_as_printed);

  const Thm33Chain& c3 = r.thm33;
  kv("thm33.status", to_string(c3.status));
  kv("thm33.reason", std::string_view(c3.reason.empty() ? "-" : c3.reason));
  kv("thm33.alpha", c3.alpha);
  kv("thm33.H0", c3.H0);
  kv("thm33.C1", c3.C1);
  kv("thm33.C2", c3.C2);
  kv("thm33.C3", c3.C3);
  kv("thm33.delta", c3.delta);
  kv("thm33.X", c3.X);
  kv("thm33.eps", c3.eps);
  kv("thm33.margin_lp1", c3.margin_lp1);
  kv("thm33.margin_H", c3.margin_H);
  kv("thm33.mu3", c3.mu3);
  kv("thm33.mu4", c3.mu4);
  kv("thm33.mu4_as_printed", c3.mu4_as_printed);
  kv("thm33.L0", c3.L0);
  kv("thm33.T_upper", c3.T_upper);
  kv("thm33.T_upper_as_printed", c3.T_upper_as_printed);

  const LowerBounds& lb = r.lowers;
  kv("lower.F0", lb.F0);
  kv("lower.varpi", lb.varpi);
  kv("lower.K1", lb.K1);
  kv("lower.K2", lb.K2);
  kv("lower.K2_conservative", lb.K2_conservative);
  kv("lower.G0", lb.G0);
  kv("lower.C_eff", lb.C_eff);
  kv("lower.zero_data", lb.zero_data);
  kv("T_lower_34_truncated", lb.T_lower_34_truncated);
  kv("T_lower_34_with_tail", lb.T_lower_34_with_tail);
  kv("T_lower_34_conservative", lb.T_lower_34_conservative);
  kv("T_lower_35", lb.T_lower_35);

  kv("thm31_case_i", r.thm31_case_i);
  kv("thm31_case_ii", r.thm31_case_ii);
  kv("thm32_applicable", r.thm32_applicable);
  kv("thm33_applicable", r.thm33_applicable);
  kv("T_upper", r.T_upper);
  kv("T_lower", r.T_lower);
  kv("blowup_detected", r.blowup.detected);
  kv("blowup_coarse", r.blowup.coarse);
  kv("blowup_kappa", r.blowup.kappa);
  kv("blowup_tail_points", r.blowup.tail_points);
  for (const Crossing& c : r.blowup.crossings) kv("crossing." + format_double(c.threshold), c.t);
  kv("T_num", r.blowup.T_num);
  kv("uncertainty", r.blowup.uncertainty);
  kv("t_end", r.t_end);
  kv("sandwich_ok", r.sandwich_ok);
}

std::string report_csv_header() {
  return "E0,thm31_verdict,thm32_status,thm33_status,detected,T_num,uncertainty,T_upper,"
         "T_lower_34_truncated,T_lower_35,sandwich_ok";
}

std::string report_csv_row(const BoundReport& r) {
  std::ostringstream o;
  o << format_double(r.E0) << ',' << to_string(r.thm31_verdict) << ',' << to_string(r.thm32.status) << ','
    << to_string(r.thm33.status) << ',' << b(r.blowup.detected) << ',' << format_double(r.blowup.T_num) << ','
    << format_double(r.blowup.uncertainty) << ',' << format_double(r.T_upper) << ','
    << format_double(r.lowers.T_lower_34_truncated) << ',' << format_double(r.lowers.T_lower_35) << ','
    << b(r.sandwich_ok);
  return o.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw IoError("failed writing " + path.string());
}

}  // namespace beamblow
