#pragma once

#include <cstddef>
#include <memory>
#include <optional>

#include "ultratree/metric.hpp"
#include "ultratree/sdz.hpp"
#include "ultratree/tree.hpp"

namespace ultratree {

/// Every position has children 0..arity-1.
PrunedTree complete_tree(std::size_t arity, std::optional<std::size_t> horizon,
                         std::size_t child_cap = kDefaultChildCap);

/// Representing tree of the infinite space {p_n = 2^-n}, d(p_i, p_j) = 2^-min(i,j).
/// Nodes are labeled by the smallest point index of their ball: the tail ball
/// at depth k is labeled k, the singleton {p_j} is labeled j.
PrunedTree geometric_tail_tree(std::optional<std::size_t> horizon, std::size_t child_cap = kDefaultChildCap);

/// φ(p_n) in geometric_tail_tree: tail labels 1..n, then the singleton n.
Branch geometric_tail_point(std::size_t n);
/// The branch that stays in the tail ball forever, truncated at `depth`.
Position geometric_tail_limit(std::size_t depth);

/// The clade {φ(p_n)} restricted to points whose branch separates from the
/// tail within the horizon of `tree`.
CladeSpace geometric_tail_clade(std::shared_ptr<const PrunedTree> tree);

/// r_k = 2^-k.
RadiusSchedule geometric_schedule(std::size_t horizon);
/// r_k = 1/(k+1).
RadiusSchedule harmonic_schedule(std::size_t horizon);

/// Four points a, b, c, d with d(a,b) = 1/4, d(a,c) = d(b,c) = 1/2, d(·,d) = 1.
DistanceMatrix x4_space();
/// Points p_0..p_N with d(p_i, p_j) = 2^-min(i,j).
DistanceMatrix geometric_space(std::size_t N);

}  // namespace ultratree
