#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace convbody {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double l1_norm(const Vec& a) {
  double s = 0.0;
  for (double v : a) s += std::fabs(v);
  return s;
}

inline double linf_norm(const Vec& a) {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::fabs(v));
  return s;
}

inline Vec operator+(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) r[j] = a[j] + b[j];
  return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) r[j] = a[j] - b[j];
  return r;
}

inline Vec operator*(double s, const Vec& a) {
  Vec r(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) r[j] = s * a[j];
  return r;
}

inline Vec negated(const Vec& a) {
  Vec r(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) r[j] = -a[j];
  return r;
}

// y += s * x
inline void axpy(double s, const Vec& x, Vec& y) {
  for (std::size_t j = 0; j < x.size(); ++j) y[j] += s * x[j];
}

inline bool all_finite(const Vec& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

// Fixed-order pairwise summation. The reduction tree depends only on the
// element count, so results are bit-stable regardless of how the values
// were produced (serial or parallel fill).
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_mean(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("pairwise_mean: empty input");
  return pairwise_sum(v) / static_cast<double>(v.size());
}

// A point of the unit sphere. Construction checks the norm; use unit() to
// normalize an arbitrary nonzero vector.
class Direction {
 public:
  explicit Direction(Vec coords) : c_(std::move(coords)) {
    if (c_.empty()) throw std::invalid_argument("Direction: dimension 0");
    if (!all_finite(c_)) throw std::invalid_argument("Direction: non-finite entry");
    double n = norm2(c_);
    if (std::fabs(n - 1.0) > 1e-12)
      throw std::invalid_argument("Direction: norm differs from 1 by more than 1e-12");
  }

  static Direction unit(const Vec& v) {
    double n = norm2(v);
    if (n == 0.0) throw std::invalid_argument("Direction::unit: zero vector");
    return Direction((1.0 / n) * v);
  }

  const Vec& coords() const noexcept { return c_; }
  std::size_t dim() const noexcept { return c_.size(); }

 private:
  Vec c_;
};

}  // namespace convbody
