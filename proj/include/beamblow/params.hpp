#pragma once

namespace beamblow {

// Exponents and Kirchhoff coefficient of
//   u_tt + Lap^2 u - M(||grad u||^2) Lap u - Lap u_t + |u_t|^{r-1} u_t = |u|^{p-1} u,
//   M(s) = 1 + beta s^gamma.
struct ModelParams {
  double p = 3.0;
  double r = 2.0;
  double gamma = 1.0;
  double beta = 1.0;
  int dim = 1;

  // Throws InvalidArgument unless 1 <= r < p, 1 < p, 2 gamma + 1 <= p,
  // gamma >= 0, beta >= 0 and dim in {1, 2}.
  void validate() const;

  // 2 gamma + 1 < p strictly; the blow-up chains need it.
  bool strict_growth() const { return 2.0 * gamma + 1.0 < p; }

  bool operator==(const ModelParams&) const = default;
};

// M(s) = 1 + beta s^gamma; throws InvalidArgument for s < 0.
double kirchhoff(double s, const ModelParams& params);

}  // namespace beamblow
