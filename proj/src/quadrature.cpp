#include "convbody/quadrature.hpp"

#include <array>
#include <cmath>

namespace convbody {

namespace {

// 15-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 8> kNodes = {
    0.0,
    0.20119409399743452230,
    0.39415134707756336990,
    0.57097217260853884754,
    0.72441773136017004742,
    0.84820658341042721620,
    0.93727339240070590431,
    0.98799251802048542849,
};
constexpr std::array<double, 8> kWeights = {
    0.20257824192556127288,
    0.19843148532711157646,
    0.18616100001556221103,
    0.16626920581699393355,
    0.13957067792615431445,
    0.10715922046717193501,
    0.07036604748810812471,
    0.03075324199611726835,
};

double gl15(const std::function<double(double)>& f, double a, double b) {
  double mid = 0.5 * (a + b);
  double half = 0.5 * (b - a);
  double s = kWeights[0] * f(mid);
  for (int k = 1; k < 8; ++k) {
    double d = half * kNodes[k];
    s += kWeights[k] * (f(mid - d) + f(mid + d));
  }
  return half * s;
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol,
             double whole, int depth) {
  double mid = 0.5 * (a + b);
  double left = gl15(f, a, mid);
  double right = gl15(f, mid, b);
  double split = left + right;
  if (std::fabs(split - whole) <= tol || depth >= 48) return split;
  return adapt(f, a, mid, 0.5 * tol, left, depth + 1) +
         adapt(f, mid, b, 0.5 * tol, right, depth + 1);
}

}  // namespace

double adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                               double abs_tol) {
  if (a == b) return 0.0;
  return adapt(f, a, b, abs_tol, gl15(f, a, b), 0);
}

}  // namespace convbody
