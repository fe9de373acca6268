#include "convbody/constants.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace convbody {

double cn_closed_form(std::size_t n) {
  if (n == 0) throw std::invalid_argument("cn_closed_form: dimension must be >= 1");
  double c = (n % 2 == 1) ? 1.0 : 2.0 / std::numbers::pi_v<double>;
  for (std::size_t m = (n % 2 == 1) ? 3 : 4; m <= n; m += 2)
    c *= static_cast<double>(m - 2) / static_cast<double>(m - 1);
  return c;
}

double sin_power_integral(std::size_t m) {
  double v = (m % 2 == 0) ? std::numbers::pi_v<double> : 2.0;
  for (std::size_t k = (m % 2 == 0) ? 2 : 3; k <= m; k += 2)
    v *= static_cast<double>(k - 1) / static_cast<double>(k);
  return v;
}

double sphere_surface_area(std::size_t n) {
  if (n == 0) throw std::invalid_argument("sphere_surface_area: dimension must be >= 1");
  double half = 0.5 * static_cast<double>(n);
  return 2.0 * std::pow(std::numbers::pi_v<double>, half) / std::tgamma(half);
}

}  // namespace convbody
