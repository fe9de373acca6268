#include "convbody/sphere.hpp"

#include <stdexcept>

#include "convbody/rng.hpp"

namespace convbody {

namespace {

// One independent unit vector from substream `stream`. Retries (fresh draw
// block, same stream) if the Gaussian vector is too short to normalize.
Vec draw_direction(const CounterRng& rng, std::uint64_t stream, std::size_t n) {
  const std::size_t pairs = (n + 1) / 2;
  Vec g(n);
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::uint64_t base = attempt * 2 * pairs;
    for (std::size_t p = 0; p < pairs; ++p) {
      double g0, g1;
      rng.gaussian_pair(stream, base + 2 * p, g0, g1);
      g[2 * p] = g0;
      if (2 * p + 1 < n) g[2 * p + 1] = g1;
    }
    double nrm = norm2(g);
    if (nrm >= 1e-300) {
      for (double& x : g) x /= nrm;
      return g;
    }
  }
}

}  // namespace

SphereSample sample_sphere(std::size_t n, std::size_t count, std::uint64_t seed,
                           bool antithetic) {
  if (n == 0) throw std::invalid_argument("sample_sphere: dimension must be >= 1");
  if (count == 0) throw std::invalid_argument("sample_sphere: count must be >= 1");
  if (antithetic && count % 2 != 0)
    throw std::invalid_argument("sample_sphere: antithetic pairing needs an even count");

  CounterRng rng(seed);
  SphereSample out;
  out.dim = n;
  out.seed = seed;
  out.antithetic = antithetic;
  out.directions.reserve(count);

  const std::size_t independent = antithetic ? count / 2 : count;
  for (std::size_t i = 0; i < independent; ++i) {
    Vec u = draw_direction(rng, i, n);
    if (antithetic) {
      out.directions.push_back(u);
      out.directions.push_back(negated(u));
    } else {
      out.directions.push_back(std::move(u));
    }
  }
  return out;
}

}  // namespace convbody
