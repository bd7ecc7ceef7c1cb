#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "core.hpp"
#include "heisenberg.hpp"
#include "madic.hpp"

namespace mhg {

using Rng = std::mt19937_64;

/// Uniform-enough draw from [0, bound) for bound > 0; 64-bit limbs reduced
/// with a 64-bit surplus so the bias is below 2^-64.
inline Integer random_below(Rng& rng, const Integer& bound)
{
  Integer acc = 0;
  Integer span = 1;
  while (span < bound) {
    acc = (acc << 64) | Integer(rng());
    span <<= 64;
  }
  acc = (acc << 64) | Integer(rng());
  return acc % bound;
}

/// Draw from [lo, hi].
inline Integer random_between(Rng& rng, const Integer& lo, const Integer& hi)
{
  return lo + random_below(rng, hi - lo + 1);
}

inline MadicInt random_madic(Rng& rng, const Integer& m, std::uint32_t n)
{
  return MadicInt(m, n, random_below(rng, ipow(m, n)));
}

inline HPoint random_point(Rng& rng, const HeisenbergContext& ctx)
{
  Integer order = ipow(ctx.modulus(), ctx.precision());
  std::vector<Integer> x;
  for (std::size_t i = 0; i < ctx.rank(); ++i)
    x.push_back(random_below(rng, order));
  return ctx.point(x, random_below(rng, order));
}

}  // namespace mhg
