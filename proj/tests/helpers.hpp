#pragma once

// Test-only oracles, independent of the library paths they check.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "convbody/intersection.hpp"
#include "convbody/rng.hpp"
#include "convbody/vec.hpp"

namespace testing_oracles {

using convbody::Vec;
using convbody::operator*;
using convbody::operator+;
using convbody::operator-;

// Exact M* of the unit-ball lens B ∩ (lambda x + B) in the plane:
// integrating the three support regimes over the circle collapses to
// 1 - (2/pi) asin(lambda/2).
inline double lens_mstar_exact_n2(double lambda) {
  return 1.0 - (2.0 / std::numbers::pi) * std::asin(0.5 * lambda);
}

// Same in dimension 3, where the marginal of <x,u> is uniform on [-1,1]:
// M* = (2 - lambda + sqrt(1 - lambda^2/4) asin(lambda/2)) / 2.
inline double lens_mstar_exact_n3(double lambda) {
  double h = 0.5 * lambda;
  return 0.5 * (2.0 - lambda + std::sqrt(1.0 - h * h) * std::asin(h));
}

// Root of f (strictly decreasing) on [lo, hi] by plain bisection.
inline double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-14) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Support of (axis-aligned ellipsoid) ∩ (t + same ellipsoid) via the linear
// map that turns the pair into a unit-ball lens: with A = diag(axes),
//   h(u) = |A u| * lens_support(|A^{-1} t|, <t, u> / (|A^{-1} t| |A u|)).
inline double ellipsoid_pair_support_oracle(const Vec& axes, const Vec& t, const Vec& u) {
  std::size_t n = axes.size();
  double au = 0.0, at = 0.0, tu = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    au += axes[j] * axes[j] * u[j] * u[j];
    at += t[j] * t[j] / (axes[j] * axes[j]);
    tu += t[j] * u[j];
  }
  au = std::sqrt(au);
  at = std::sqrt(at);
  if (at == 0.0) return au;
  return au * convbody::lens_support(at, tu / (at * au));
}

// All vertices of a small H-polytope by brute-force enumeration of row
// subsets (n x n solves, feasibility filtered).
inline std::vector<Vec> enumerate_vertices(const std::vector<Vec>& rows, const Vec& offsets) {
  std::size_t m = rows.size();
  std::size_t n = rows.empty() ? 0 : rows[0].size();
  std::vector<Vec> verts;
  std::vector<std::size_t> idx(n);

  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t k) {
    if (k == n) {
      // Solve the n x n system rows[idx] y = offsets[idx].
      std::vector<Vec> a(n, Vec(n + 1));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = rows[idx[i]][j];
        a[i][n] = offsets[idx[i]];
      }
      for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i)
          if (std::fabs(a[i][col]) > std::fabs(a[piv][col])) piv = i;
        if (std::fabs(a[piv][col]) < 1e-9) return;
        std::swap(a[piv], a[col]);
        for (std::size_t i = 0; i < n; ++i) {
          if (i == col) continue;
          double f = a[i][col] / a[col][col];
          for (std::size_t j = col; j <= n; ++j) a[i][j] -= f * a[col][j];
        }
      }
      Vec y(n);
      for (std::size_t j = 0; j < n; ++j) y[j] = a[j][n] / a[j][j];
      for (std::size_t i = 0; i < m; ++i)
        if (convbody::dot(rows[i], y) > offsets[i] + 1e-9) return;
      verts.push_back(std::move(y));
      return;
    }
    for (std::size_t i = start; i + (n - k) <= m; ++i) {
      idx[k] = i;
      rec(i + 1, k + 1);
    }
  };
  rec(0, 0);
  return verts;
}

// Little deterministic value stream for building random test instances.
class TestRand {
 public:
  explicit TestRand(std::uint64_t seed) : rng_(seed) {}
  double uniform() { return rng_.uniform(0, counter_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double gaussian() {
    double g0, g1;
    rng_.gaussian_pair(1, 2 * counter_, g0, g1);
    ++counter_;
    return g0;
  }
  Vec unit_vector(std::size_t n) {
    Vec v(n);
    double nv = 0.0;
    do {
      for (auto& x : v) x = gaussian();
      nv = convbody::norm2(v);
    } while (nv < 1e-12);
    return (1.0 / nv) * v;
  }

 private:
  convbody::CounterRng rng_;
  std::uint64_t counter_ = 0;
};

}  // namespace testing_oracles
