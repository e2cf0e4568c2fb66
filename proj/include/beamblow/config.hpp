#pragma once

// Flat `key = value` run configuration; `#` starts a comment.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "beamblow/bounds.hpp"
#include "beamblow/dynamics.hpp"
#include "beamblow/params.hpp"
#include "beamblow/spectra.hpp"

namespace beamblow {

struct RunConfig {
  int dim = 1;
  int N = 128;
  double extent = 1.0;
  double p = 3.0;
  double r = 2.0;
  double gamma = 1.0;
  double beta = 1.0;
  std::string preset = "negative_energy";
  std::optional<double> amplitude;
  // high_energy target; 10 d when absent.
  std::optional<double> energy_R;
  std::uint64_t seed = 20240611;
  double dt_max = 1e-4;
  // 1e-12 dt_max when absent.
  std::optional<double> dt_min;
  double t_max = 10.0;
  double blow_threshold = 1e10;
  int output_every = 50;
  std::vector<double> thresholds{1e2, 1e4, 1e6, 1e8};
  double mu = 1.0;
  std::optional<double> alpha_override;
  std::optional<double> eps_override;
  double M_safety = 2.0;

  ModelParams model() const { return {p, r, gamma, beta, dim}; }
  StepControls step_controls() const;
  StopRule stop_rule() const { return {t_max, blow_threshold, output_every}; }
  BoundOverrides overrides() const { return {mu, M_safety, alpha_override, eps_override}; }
  EmbeddingOptions embedding_options() const;

  bool operator==(const RunConfig&) const = default;
};

inline constexpr std::size_t kDefaultSweepCap = 10000;

struct SweepConfig {
  RunConfig base;
  // (key, values) from `sweep.<key> = v1, v2, ...`, sorted by key.
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  std::size_t cap = kDefaultSweepCap;

  std::size_t size() const;
};

// Throws ParseError naming the key and line for unknown keys, malformed
// values and constraint violations. Sweep axes are rejected here.
RunConfig parse_config(std::string_view text);
// Same, but accepts `sweep.<key>` lines; each axis value is checked by
// substituting it into the base config.
SweepConfig parse_sweep_config(std::string_view text, std::size_t cap = kDefaultSweepCap);

// Throws ParseError if the config breaks a constraint.
void validate(const RunConfig& config);

// Every key, floats with 17 significant digits; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& config);

// Sets one key from its text form (the same rules as a config line).
void set_key(RunConfig& config, std::string_view key, std::string_view value, int line = 0);

std::string format_double(double x);

}  // namespace beamblow
