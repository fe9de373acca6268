#pragma once

#include <cstddef>

namespace convbody {

inline constexpr const char* kVersion = "0.1.0";

// c_n = average of |<x, u>| over the unit sphere (normalized measure),
// equal to Gamma(n/2) / (sqrt(pi) * Gamma((n+1)/2)). Evaluated by the exact
// half-integer product recurrence c_n = c_{n-2} * (n-2)/(n-1), which keeps
// rational values (c_1 = 1, c_3 = 1/2, ...) exact in floating point.
double cn_closed_form(std::size_t n);

// \int_0^pi sin^m(t) dt by the exact recurrence I_m = I_{m-2} * (m-1)/m.
double sin_power_integral(std::size_t m);

// Surface area of S^{n-1} in R^n: 2 pi^{n/2} / Gamma(n/2).
double sphere_surface_area(std::size_t n);

}  // namespace convbody
