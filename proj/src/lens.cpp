#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "convbody/errors.hpp"
#include "convbody/intersection.hpp"

namespace convbody {

double lens_support(double lambda, double c) {
  if (lambda < 0.0) throw std::invalid_argument("lens_support: lambda must be >= 0");
  if (lambda > 2.0) throw EmptyBodyError("lens_support: lambda > 2, balls do not meet");
  if (std::fabs(c) > 1.0 + 1e-12) throw std::invalid_argument("lens_support: c outside [-1, 1]");
  c = std::clamp(c, -1.0, 1.0);

  double half = 0.5 * lambda;
  if (c >= half) return 1.0;       // witness u stays inside the shifted ball
  if (c <= -half) return 1.0 + lambda * c;  // witness lambda*x + u stays inside the first ball
  // Support attained on the rim sphere, which lies in the hyperplane
  // <y, x> = lambda/2 with radius sqrt(1 - lambda^2/4).
  return half * c + std::sqrt((1.0 - half * half) * (1.0 - c * c));
}

}  // namespace convbody
