#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "convbody/bodies.hpp"
#include "convbody/vec.hpp"

namespace convbody {

// The body K ∩ (t + L). Construction validates dimensions and nonemptiness
// (an empty intersection throws EmptyBodyError up front, so the radial
// bisection caller never has to interpret solver failures).
class ShiftedIntersection {
 public:
  ShiftedIntersection(BodyDescriptor K, BodyDescriptor L, Vec t);

  const BodyDescriptor& K() const noexcept { return K_; }
  const BodyDescriptor& L() const noexcept { return L_; }
  const Vec& shift() const noexcept { return t_; }
  std::size_t dim() const noexcept { return K_.dim(); }

 private:
  BodyDescriptor K_;
  BodyDescriptor L_;
  Vec t_;
};

// One linear constraint <a, y> <= b.
struct LpRow {
  Vec a;
  double b = 0.0;
};

enum class SolveMethod { closed_box, closed_lens, simplex, infconv };

const char* to_string(SolveMethod m);

struct SupportSolveReport {
  double value = 0.0;
  Vec witness;  // feasible for both K and t+L (within 1e-8)
  SolveMethod method = SolveMethod::infconv;
  int iterations = 0;
  double certified_gap = 0.0;  // value - <witness, u>; 0 for exact paths
};

struct InfconvOptions {
  double tol = 1e-6;
  int max_iter = 10000;
};

// Support function of the unit-ball lens B ∩ (λx + B) for unit x, as a
// function of c = <x, u>. Three regimes: the cap of the unshifted ball
// (c >= λ/2, value 1), the cap of the shifted ball (c <= -λ/2, value 1+λc),
// and the rim circle in between.
double lens_support(double lambda, double c);

// max <y, u> over {y : <a_i, y> <= b_i}. Feasible bounded regions only.
SupportSolveReport lp_support(const std::vector<LpRow>& rows, const Direction& u);
SupportSolveReport lp_support_raw(const std::vector<LpRow>& rows, const Vec& objective);

// Generic fallback: minimizes phi(v) = h_K(u-v) + h_L(v) + <t, v> by a
// subgradient method, certifying the value against feasible primal points.
SupportSolveReport infconv_support(const ShiftedIntersection& S, const Direction& u,
                                   double tol, int max_iter = 10000);

// Dispatch: box/box -> closed interval arithmetic; equal-radius ball pairs
// -> closed lens; polytopal pairs -> simplex; everything else -> infconv.
SupportSolveReport support_intersection(const ShiftedIntersection& S, const Direction& u,
                                        const InfconvOptions& opts = {});

}  // namespace convbody
