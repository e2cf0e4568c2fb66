#include "beamblow/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "beamblow/errors.hpp"

namespace beamblow {

namespace {

struct Fit {
  double ss = std::numeric_limits<double>::infinity();
  double slope = 0.0;
};

// Least squares of ln(norm) against ln(T - t) over the tail.
Fit fit_at(std::span<const double> t, std::span<const double> log_norm, double T) {
  const std::size_t n = t.size();
  double sx = 0.0, sy = 0.0;
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = std::log(T - t[k]);
    sx += x[k];
    sy += log_norm[k];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = x[k] - mx, dy = log_norm[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  Fit f;
  if (!(sxx > 0.0)) return f;
  f.slope = sxy / sxx;
  f.ss = std::max(0.0, syy - sxy * sxy / sxx);
  return f;
}

}  // namespace

BlowupEstimate detect_blowup(std::span<const double> t, std::span<const double> norm,
                             std::span<const double> thresholds) {
  if (t.size() != norm.size()) throw InvalidArgument("time and norm series differ in length");
  if (thresholds.size() < 3) throw InvalidArgument("need at least three thresholds");
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    if (!(thresholds[k] > 0.0)) throw InvalidArgument("thresholds must be positive");
    if (k > 0 && !(thresholds[k] > thresholds[k - 1]))
      throw InvalidArgument("thresholds must be strictly ascending");
  }
  for (std::size_t k = 1; k < t.size(); ++k)
    if (!(t[k] > t[k - 1])) throw InvalidArgument("times must be strictly increasing");

  BlowupEstimate est;
  est.T_num = std::numeric_limits<double>::quiet_NaN();
  est.uncertainty = std::numeric_limits<double>::quiet_NaN();
  std::size_t first_index = t.size();
  for (double thr : thresholds) {
    std::size_t k = 0;
    while (k < t.size() && !(norm[k] >= thr)) ++k;
    if (k == t.size()) break;
    double tc = t[k];
    if (k > 0 && norm[k - 1] > 0.0 && norm[k] > norm[k - 1]) {
      const double a = std::log(norm[k - 1]), b = std::log(norm[k]);
      tc = t[k - 1] + (std::log(thr) - a) / (b - a) * (t[k] - t[k - 1]);
    }
    if (est.crossings.empty()) first_index = k;
    est.crossings.push_back({thr, tc});
  }
  est.detected = est.crossings.size() == thresholds.size();
  if (!est.detected) return est;

  const double top_crossing = est.crossings.back().t;
  const std::size_t n_tail = t.size() - first_index;
  est.tail_points = static_cast<int>(n_tail);
  const auto coarse = [&] {
    est.coarse = true;
    est.T_num = top_crossing;
    est.uncertainty = 0.0;
    return est;
  };
  if (n_tail < static_cast<std::size_t>(kMinTailPoints)) return coarse();

  const std::span<const double> tt = t.subspan(first_index);
  std::vector<double> ln(n_tail);
  for (std::size_t k = 0; k < n_tail; ++k) ln[k] = std::log(norm[first_index + k]);

  const double t_last = tt.back();
  const double span = t_last - tt.front();
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_last));
  const double lo = std::log(std::max(floor, 1e-15 * span));
  const double hi = std::log(10.0 * span);
  if (!(hi > lo)) return coarse();

  const auto objective = [&](double log_delta) { return fit_at(tt, ln, t_last + std::exp(log_delta)).ss; };

  constexpr int kScan = 400;
  int best = 0;
  double best_ss = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScan; ++i) {
    const double x = lo + (hi - lo) * i / kScan;
    const double ss = objective(x);
    if (ss < best_ss) {
      best_ss = ss;
      best = i;
    }
  }
  if (!std::isfinite(best_ss)) return coarse();

  double a = lo + (hi - lo) * std::max(0, best - 1) / kScan;
  double b = lo + (hi - lo) * std::min(kScan, best + 1) / kScan;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = objective(c), fd = objective(d);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = objective(d);
    }
  }
  const double log_delta = 0.5 * (a + b);
  est.T_num = t_last + std::exp(log_delta);
  est.kappa = -fit_at(tt, ln, est.T_num).slope;
  est.uncertainty = std::abs(est.T_num - top_crossing);
  return est;
}

BlowupEstimate detect_blowup(const Trajectory& trajectory, std::span<const double> thresholds) {
  std::vector<double> t, norm;
  t.reserve(trajectory.snapshots.size());
  norm.reserve(trajectory.snapshots.size());
  for (const Snapshot& s : trajectory.snapshots) {
    t.push_back(s.t);
    norm.push_back(s.f.lp1_u);
  }
  return detect_blowup(t, norm, thresholds);
}

}  // namespace beamblow
