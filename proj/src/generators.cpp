#include "ultratree/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ultratree {

PrunedTree complete_tree(std::size_t arity, std::optional<std::size_t> horizon, std::size_t child_cap) {
    if (arity == 0) throw std::invalid_argument("arity must be positive");
    return PrunedTree::generator(
        [arity](std::span<const Label>, std::size_t limit) {
            std::vector<Label> out;
            const std::size_t n = std::min(arity, limit + 1);
            for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<Label>(i));
            return out;
        },
        horizon, child_cap);
}

PrunedTree geometric_tail_tree(std::optional<std::size_t> horizon, std::size_t child_cap) {
    return PrunedTree::generator(
        [](std::span<const Label> path, std::size_t) -> std::vector<Label> {
            const auto depth = static_cast<Label>(path.size());
            if (path.empty() || path.back() == depth) return {depth, depth + 1};  // tail ball splits
            return {path.back()};
        },
        horizon, child_cap);
}

Branch geometric_tail_point(std::size_t n) {
    Branch b;
    for (std::size_t i = 1; i <= n; ++i) b.prefix.push_back(static_cast<Label>(i));
    b.prefix.push_back(static_cast<Label>(n));
    b.stalk = true;
    return b;
}

Position geometric_tail_limit(std::size_t depth) {
    Position p;
    for (std::size_t i = 1; i <= depth; ++i) p.push_back(static_cast<Label>(i));
    return p;
}

CladeSpace geometric_tail_clade(std::shared_ptr<const PrunedTree> tree) {
    const std::size_t h = tree->require_horizon();
    std::vector<Branch> members;
    for (std::size_t n = 0; n + 1 <= h; ++n) members.push_back(geometric_tail_point(n));
    return CladeSpace(std::move(tree), std::move(members));
}

RadiusSchedule geometric_schedule(std::size_t horizon) {
    return RadiusSchedule::generated([](std::size_t k) { return std::ldexp(1.0, -static_cast<int>(k)); }, horizon);
}

RadiusSchedule harmonic_schedule(std::size_t horizon) {
    return RadiusSchedule::generated([](std::size_t k) { return 1.0 / static_cast<double>(k + 1); }, horizon);
}

DistanceMatrix x4_space() {
    return DistanceMatrix::from_rows({"a", "b", "c", "d"}, {{0, 0.25, 0.5, 1},
                                                            {0.25, 0, 0.5, 1},
                                                            {0.5, 0.5, 0, 1},
                                                            {1, 1, 1, 0}});
}

DistanceMatrix geometric_space(std::size_t N) {
    const std::size_t n = N + 1;
    std::vector<Value> d(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) d[i * n + j] = std::ldexp(1.0, -static_cast<int>(std::min(i, j)));
    return DistanceMatrix(DistanceMatrix::default_labels(n), std::move(d), std::vector<bool>(n * n, true));
}

}  // namespace ultratree
