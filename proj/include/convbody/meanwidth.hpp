#pragma once

#include <cstdint>
#include <functional>

#include "convbody/intersection.hpp"
#include "convbody/sphere.hpp"

namespace convbody {

enum class MwMethod { mc, lens_quadrature, box_closed };

const char* to_string(MwMethod m);

// M* = integral of the support function over the unit sphere under the
// normalized measure (half the mean width).
struct MeanWidthEstimate {
  double value = 0.0;
  double std_error = 0.0;  // exactly 0 for deterministic methods
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  MwMethod method = MwMethod::mc;
};

struct McOptions {
  int jobs = 1;
  InfconvOptions infconv;
};

// Monte Carlo estimate: the support is averaged over the sample directions,
// antithetic pairs first (their mean is half the width along the pair).
// Reusing one SphereSample across calls gives common random numbers, so
// parameter sweeps inherit the pathwise monotonicity of the integrand.
MeanWidthEstimate mean_width_mc(const BodyDescriptor& body, const SphereSample& sample,
                                const McOptions& opts = {});
MeanWidthEstimate mean_width_mc(const ShiftedIntersection& S, const SphereSample& sample,
                                const McOptions& opts = {});

// Deterministic M* of the unit-ball lens B ∩ (λx + B) in dimension n >= 2:
// the support depends only on c = <x, u>, whose spherical marginal density
// is (1-c^2)^{(n-3)/2} / B(1/2, (n-1)/2). Evaluated as a theta-integral with
// kink splits at c = ±λ/2; absolute error target 1e-12.
MeanWidthEstimate lens_mean_width_quadrature(std::size_t n, double lambda);

// Deterministic M* of box ∩ (t + box) with given half-sides: the
// intersection is a box with per-coordinate widths (2 s_j - |t_j|), and each
// coordinate contributes half its width times c_n.
MeanWidthEstimate box_mean_width_closed(const Vec& half_sides, const Vec& t);

}  // namespace convbody
