#include "beamblow/params.hpp"

#include <cmath>

#include "beamblow/errors.hpp"

namespace beamblow {

void ModelParams::validate() const {
  const auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(p) || !finite(r) || !finite(gamma) || !finite(beta))
    throw InvalidArgument("model parameters must be finite");
  if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
  if (!(r >= 1.0 && r < p)) throw InvalidArgument("need 1 <= r < p");
  if (!(gamma >= 0.0)) throw InvalidArgument("gamma must be nonnegative");
  if (!(2.0 * gamma + 1.0 <= p)) throw InvalidArgument("need 2 gamma + 1 <= p");
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be nonnegative");
  if (dim != 1 && dim != 2) throw InvalidArgument("dim must be 1 or 2");
}

double kirchhoff(double s, const ModelParams& params) {
  if (s < 0.0) throw InvalidArgument("kirchhoff argument must be nonnegative");
  if (params.beta == 0.0) return 1.0;
  return 1.0 + params.beta * std::pow(s, params.gamma);
}

}  // namespace beamblow
