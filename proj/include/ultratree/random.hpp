#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "ultratree/metric.hpp"

namespace ultratree {

enum class RadiusKind {
    dyadic,     // multiples of 1/256 in (0, 4]
    irregular,  // reals in (0, 10) that are almost never dyadic
};

/// Uniform integer in [0, bound). Portable: the same engine state gives the
/// same result on every platform.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Random ultrametric read off a random tree with n leaves and `levels`
/// radius levels: points split into random parts level by level (the last
/// level separates all of them) and d(x, y) is the radius of the level at
/// which x and y part. Point order is shuffled. Deterministic per seed.
DistanceMatrix random_ultrametric(std::size_t n, std::size_t levels, std::uint64_t seed,
                                  RadiusKind kind = RadiusKind::dyadic);

}  // namespace ultratree
