#pragma once

#include <cstdint>
#include <vector>

#include "convbody/vec.hpp"

namespace convbody {

// A frozen batch of unit directions. Immutable after construction; safe to
// share across worker threads. With antithetic pairing, directions come in
// consecutive exact-negation pairs (u, -u).
struct SphereSample {
  std::size_t dim = 0;
  std::vector<Vec> directions;
  std::uint64_t seed = 0;
  bool antithetic = true;

  std::size_t count() const noexcept { return directions.size(); }
};

// I.i.d. uniform directions on S^{n-1} via normalized standard Gaussians.
// Deterministic given (n, count, seed); direction i depends only on the
// counter substream i, so prefixes are stable when count grows.
// Preconditions: n >= 1, count >= 1, and count even when antithetic.
SphereSample sample_sphere(std::size_t n, std::size_t count, std::uint64_t seed,
                           bool antithetic = true);

}  // namespace convbody
