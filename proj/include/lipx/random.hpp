#pragma once
// Seeded generators for randomized property suites. Outputs depend only on
// the seed, so failing cases can be replayed.

#include <cstdint>
#include <random>

#include "lipx/cubes.hpp"
#include "lipx/martingale.hpp"
#include "lipx/piecewise.hpp"

namespace lipx::rnd {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi].
long integer(Rng& g, long lo, long hi);
/// Uniform multiple of 2^-bits in [lo, hi]; requires such a point to exist.
Rat dyadicIn(Rng& g, const Rat& lo, const Rat& hi, unsigned bits);
/// a/b with 1 <= b <= maxDen, uniform-ish in [lo, hi].
Rat rationalIn(Rng& g, const Rat& lo, const Rat& hi, long maxDen);

/// Nonnegative fair table with the given root; each parent splits its
/// capital at a random multiple of 2^-bits.
MartingaleTable fairTable(Rng& g, unsigned depth, const Rat& root, unsigned bits = 3);
/// Fair table with c <= M <= d everywhere (root drawn inside [c, d]).
MartingaleTable boundedTable(Rng& g, unsigned depth, const Rat& c, const Rat& d, unsigned bits = 3);
/// Stages M_0 <= ... <= M_{stages-1}: stage 0 and every increment are
/// bounded fair tables with values in [0, 2^-s * step], so the last stage is
/// bounded by 2 * step.
StagedMartingale stagedTable(Rng& g, unsigned depth, std::size_t stages, const Rat& step, unsigned bits = 3);

/// Step function with breakpoints on the 2^-maxLevel grid and values
/// a/denominator with |value| <= bound.
PiecewiseFn stepFn(Rng& g, unsigned maxLevel, std::size_t pieces, const Rat& bound, long denominator = 4);

/// Union of `count` random cubes of level 1..maxLevel.
DyadicCubeSet cubeSet(Rng& g, unsigned dim, unsigned maxLevel, std::size_t count);
/// Sum of `count` cube indicators with values a/denominator in
/// [-bound/count, bound/count], so the sum stays within [-bound, bound].
CubeStepFn cubeStepFn(Rng& g, unsigned dim, unsigned maxLevel, std::size_t count, const Rat& bound,
                      long denominator = 4);

}  // namespace lipx::rnd
