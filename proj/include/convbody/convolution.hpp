#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "convbody/meanwidth.hpp"

namespace convbody {

// The delta convolution body of K with itself is the set of shifts x whose
// intersection keeps at least a delta fraction of M*:
//   C(delta) = { x : M*(K ∩ (x+K)) >= delta * M*(K) }.
// Its radial function along a unit direction x is the root lambda* of
//   M*(K ∩ (lambda x + K)) = delta * M*(K),
// and C(delta)/(1-delta) has radius rho(x) = lambda*/(1-delta).

enum class MethodSelect { automatic, mc, deterministic };

struct RadialOptions {
  MethodSelect method = MethodSelect::automatic;
  std::size_t samples = 1u << 16;
  std::uint64_t seed = 0;
  int jobs = 1;
  double bracket_rel_tol = 1e-10;  // bisection stops at this fraction of lambda_max
  double residual_tol = 0.0;       // optional early stop on |g|
  InfconvOptions infconv;
  // Shared sample for common random numbers across solves; when null, an
  // MC solve draws its own sample from `seed`.
  const SphereSample* shared_sample = nullptr;
  // M*(K) computed with the same method/sample, to avoid recomputation in
  // direction sweeps.
  std::optional<double> mstar_hint;
};

struct RadialSolve {
  Direction x;
  double delta = 0.0;
  double lambda_star = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
  double residual = 0.0;
  int evals = 0;
  MwMethod mw_method = MwMethod::mc;
  double mstar_body = 0.0;  // M*(K) by the same estimator
  double lambda_max = 0.0;  // 2 / |x|_K
};

// Bracketed bisection for lambda*. One SphereSample is shared across every
// evaluation of an MC solve, so g(lambda) is a deterministic monotone
// function of lambda given the sample.
RadialSolve radial_lambda(const BodyDescriptor& K, const Direction& x, double delta,
                          const RadialOptions& opts = {});

// Radius of C(delta)/(1-delta) along x.
double normalized_radial(const RadialSolve& solve);

// Radius of the limiting body lim C(delta)/(1-delta) for smooth K:
// 2 M*(K) / c_n. (Each unit of shift removes |<x,u>| from the support on
// the half sphere facing away from the shift, so the first-order loss of
// M* per unit lambda is c_n/2.)
double limiting_radius(double mstar, std::size_t n);

struct DeviationReport {
  double delta = 0.0;
  std::vector<std::pair<Direction, double>> t_values;
  double sup_dev = 0.0;  // max |T(x) - 1|
  std::size_t n_directions = 0;
  MwMethod mw_method = MwMethod::mc;
};

// T(x) = limiting_radius / rho(x); identically 1 in the smooth-body limit,
// and equal to the l1 norm of x for the unit cube.
DeviationReport deviation_T(const BodyDescriptor& K, double delta,
                            const std::vector<Direction>& directions,
                            const RadialOptions& opts = {});

struct RateFit {
  std::vector<double> deltas;
  std::vector<double> sup_devs;
  double slope = 0.0;      // of log sup_dev against log(1-delta)
  double intercept = 0.0;
  double r_squared = 0.0;
  bool decaying = false;   // sup_dev actually falls across the schedule
};

struct RateOptions {
  RadialOptions radial;
  std::size_t n_directions = 8;
  std::uint64_t direction_seed = 1;
};

// Least-squares fit of log sup_dev vs log(1-delta) over the schedule,
// restricted to the region n (1-delta)^2 <= 4/27 where the normalized body
// is close enough to its limit for the rate to show. Needs >= 3 usable
// points.
RateFit rate_fit(const BodyDescriptor& K, const std::vector<double>& deltas,
                 const RateOptions& opts = {});

// Closed-form normalized radius for the unit cube [-1,1]^n: the
// intersection with a shifted copy is a box, M* is linear in lambda, and
// rho(x) = 2 n / |x|_1 for unit x, independent of delta. Rejects (x, delta)
// outside the region where the intersection box stays proper
// (lambda* max_j |x_j| <= 2 after normalizing x).
double cube_radial_closed(std::size_t n, const Vec& x, double delta);

struct ProbeReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;  // most negative slack seen
};

// Midpoint test of convexity: boundary points lambda1 x1, lambda2 x2 of
// C(delta) must have M*(K ∩ (m+K)) >= delta M*(K) - 3 SE at the midpoint m.
ProbeReport convexity_probe(const BodyDescriptor& K, double delta, std::size_t trials,
                            std::uint64_t seed, const RadialOptions& opts = {});

// lambda*(x, delta2) <= lambda*(x, delta1) + tol for delta1 < delta2.
ProbeReport monotonicity_probe(const BodyDescriptor& K, double delta1, double delta2,
                               const std::vector<Direction>& directions,
                               const RadialOptions& opts = {});

}  // namespace convbody
