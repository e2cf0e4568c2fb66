#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "beamblow/bounds.hpp"
#include "beamblow/config.hpp"
#include "beamblow/errors.hpp"
#include "beamblow/io.hpp"
#include "beamblow/run.hpp"
#include "beamblow/sweep.hpp"
#include "beamblow/verify.hpp"

namespace fs = std::filesystem;
using namespace beamblow;

namespace {

struct Options {
  std::string config;
  std::string out;
  int jobs = 1;
  std::optional<double> energy;
  bool corrupt_stencil = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

RunConfig load(const Options& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : parse_config(read_file(o.config));
  if (o.energy) {
    c.energy_R = *o.energy;
    validate(c);
  }
  return c;
}

// Prints `text` and also writes it to out/<name> when --out is given.
void emit(const Options& o, const std::string& name, const std::string& text) {
  std::cout << text;
  if (o.out.empty()) return;
  fs::create_directories(o.out);
  write_text_file(fs::path(o.out) / name, text);
}

int cmd_spectra(const Options& o) {
  const RunConfig c = load(o);
  const Grid g = grid_for(c);
  std::ostringstream text;
  write_constants(text, compute_constants(g, c.model(), c.embedding_options()));
  emit(o, "constants.txt", text.str());
  return kExitOk;
}

int cmd_simulate(const Options& o) {
  const RunConfig c = load(o);
  return run(c, o.out.empty() ? fs::path("out") : fs::path(o.out), std::cout);
}

int cmd_bounds(const Options& o) {
  const RunConfig c = load(o);
  const Grid g = grid_for(c);
  const VariationalConstants k = compute_constants(g, c.model(), c.embedding_options());
  const InitialData data = initial_data_for(c, g, k);
  const BoundReport r = full_report(g, data.u0, data.u1, c.model(), k, c.overrides(), BlowupEstimate{}, 0.0);
  std::ostringstream text;
  write_report(text, r);
  emit(o, "report.txt", text.str());
  std::cout << report_csv_header() << '\n' << report_csv_row(r) << '\n';
  return kExitOk;
}

int cmd_construct(const Options& o) {
  RunConfig c = load(o);
  c.preset = "high_energy";
  const Grid g = grid_for(c);
  const VariationalConstants k = compute_constants(g, c.model(), c.embedding_options());
  const InitialData data = initial_data_for(c, g, k);
  std::ostringstream meta;
  write_initial_meta(meta, data);
  emit(o, "meta.txt", meta.str());
  if (!o.out.empty()) {
    std::ostringstream u0, u1;
    write_field(u0, g, data.u0);
    write_field(u1, g, data.u1);
    write_text_file(fs::path(o.out) / "u0.csv", u0.str());
    write_text_file(fs::path(o.out) / "u1.csv", u1.str());
  }
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  if (o.config.empty()) throw InvalidArgument("sweep needs --config");
  const SweepConfig s = parse_sweep_config(read_file(o.config));
  const std::vector<SweepRow> rows = sweep(s, o.jobs);
  emit(o, "summary.csv", sweep_table(s, rows));
  return kExitOk;
}

int cmd_verify(const Options& o) {
  VerifyOptions v;
  if (!o.config.empty()) v.seed = load(o).seed;
  v.corrupt_stencil = o.corrupt_stencil;
  bool ok = true;
  for (const SuiteResult& r : verify(v, &std::cout)) ok = ok && r.passed;
  std::cout << (ok ? "all suites passed\n" : "some suites failed\n");
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blow-up experiments for a damped extensible beam"};
  app.require_subcommand(1);
  Options o;
  int (*handler)(const Options&) = nullptr;

  const auto add = [&](const char* name, const char* help, int (*fn)(const Options&), bool needs_config) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* config = sub->add_option("--config", o.config, "Config file (key = value lines)");
    if (needs_config) config->required();
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--jobs", o.jobs, "Concurrent runs for sweep")->check(CLI::PositiveNumber);
    sub->add_option("--energy", o.energy, "Target energy R for the high_energy construction");
    sub->callback([&handler, fn] { handler = fn; });
    return sub;
  };
  add("spectra", "Grid constants: eigenvalues, embedding constants, well depth", cmd_spectra, true);
  add("simulate", "Run one configuration and write its outputs", cmd_simulate, true);
  add("bounds", "Blow-up criteria and time bounds for the initial data", cmd_bounds, true);
  add("construct", "Build initial data at a prescribed energy", cmd_construct, true);
  add("sweep", "Run the cartesian product of sweep.<key> axes", cmd_sweep, true);
  CLI::App* verify_cmd = add("verify", "Run the verification suites", cmd_verify, false);
  verify_cmd->add_flag("--corrupt-stencil", o.corrupt_stencil, "Test hook: perturb the biharmonic stencil");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInvalidArgument;
  }
  try {
    return handler(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}
