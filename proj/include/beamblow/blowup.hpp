#pragma once

#include <span>
#include <vector>

#include "beamblow/dynamics.hpp"

namespace beamblow {

struct Crossing {
  double threshold = 0.0;
  double t = 0.0;
};

struct BlowupEstimate {
  bool detected = false;
  // Fitted pole time; NaN when not detected.
  double T_num = 0.0;
  // |T_num - time the top threshold was crossed|.
  double uncertainty = 0.0;
  // Too few points after the first crossing to fit; T_num is the last crossing.
  bool coarse = false;
  // Fitted exponent in ||u||_{p+1} ~ K (T - t)^{-kappa}.
  double kappa = 0.0;
  int tail_points = 0;
  std::vector<Crossing> crossings;
};

inline constexpr int kMinTailPoints = 5;

// Series form: norm[k] = ||u||_{p+1} at time t[k], t strictly increasing.
// Thresholds must be ascending with at least three entries. Crossing times
// are interpolated linearly in log(norm) between samples.
BlowupEstimate detect_blowup(std::span<const double> t, std::span<const double> norm,
                             std::span<const double> thresholds);

BlowupEstimate detect_blowup(const Trajectory& trajectory, std::span<const double> thresholds);

}  // namespace beamblow
