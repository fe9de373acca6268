#pragma once

#include <functional>

namespace convbody {

// Adaptive Gauss-Legendre on [a, b]: 15-point panels, bisected until the
// whole-panel and split-panel estimates agree within the local tolerance.
// Intended for integrands that are smooth inside the interval; split at
// interior kinks before calling.
double adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                               double abs_tol);

}  // namespace convbody
