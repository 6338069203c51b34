#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ultratree/metric.hpp"
#include "ultratree/sdz.hpp"
#include "ultratree/tree.hpp"

namespace ultratree {

/// An open ball B(center, radius) requested for a Vitali selection.
struct BallRequest {
    PointIndex center = 0;
    Value radius = 0;

    friend auto operator<=>(const BallRequest&, const BallRequest&) = default;
};

/// Disjoint subfamily with the same union, chosen greedily by realized
/// diameter (largest first), then by smallest member index. Requests with
/// identical member sets are merged, keeping the least request.
/// Throws NotUltrametricError on non-ultrametric input.
std::vector<BallRequest> vitali_select(const DistanceMatrix& m, std::span<const BallRequest> requests);

/// Verdict of a tree property. `exact` is false when the verdict only holds
/// up to `horizon`; `witness` names the offending position, if any.
struct Verdict {
    bool value = true;
    bool exact = true;
    std::optional<std::size_t> horizon;
    std::optional<Position> witness;
};

struct OffspringProfile {
    std::vector<std::size_t> per_level;  // max offspring among positions of each length
    std::size_t max = 0;
    bool exact = true;
    std::optional<std::size_t> horizon;
    std::optional<Position> overflow_at;  // first position whose children exceeded the cap
};

OffspringProfile max_offspring(const PrunedTree& t);
Verdict is_totally_bounded(const PrunedTree& t);

struct PositionCounts {
    std::vector<std::size_t> per_level;
    /// Explicit trees: the constant count below the deepest stored level.
    std::optional<std::size_t> tail_count;
    bool exact = true;
    std::optional<std::size_t> horizon;
    std::optional<Position> overflow_at;
};

PositionCounts count_positions(const PrunedTree& t);
/// Countably many positions. A child-cap overflow is reported as false with
/// the overflowing position as witness.
Verdict is_separable(const PrunedTree& t);

struct Isolation {
    std::vector<Branch> isolated;
    std::size_t probed = 0;
    bool exact = true;
    std::optional<std::size_t> horizon;
};

/// Branches all but finitely many of whose prefixes have one offspring. For
/// generator trees a probed branch counts as isolated when its position at
/// the horizon has a single child.
Isolation isolated_branches(const PrunedTree& t);
Verdict is_discrete(const PrunedTree& t);
Verdict is_perfect(const PrunedTree& t);

/// max_offspring(t) <= D. A false answer refutes doubling with constant D.
bool doubling_necessary(const PrunedTree& t, std::size_t D);

struct DoublingBound {
    std::size_t constant = 0;
    int condition = 0;                // 1: eventually one offspring, 2: radius ratio
    std::optional<std::size_t> depth;  // k1 for condition 1
    std::optional<std::size_t> lag;    // l for condition 2
    bool exact = true;
    std::optional<std::size_t> horizon;
};

inline constexpr std::size_t kDefaultLagMax = 8;
inline constexpr std::size_t kDefaultBruteForceCap = 16;

/// Sufficient doubling conditions on a representing tree and its schedule.
/// nullopt means inconclusive, never "not doubling".
std::optional<DoublingBound> doubling_sufficient(const PrunedTree& t, const RadiusSchedule& s,
                                                 std::size_t l_max = kDefaultLagMax);

/// Minimal D such that every B̄(x, r) is covered by D closed balls of radius
/// r/2, found by exhaustive covering search over the critical radii.
/// Throws CapExceededError if m has more than `cap` points.
std::size_t doubling_bruteforce(const DistanceMatrix& m, std::size_t cap = kDefaultBruteForceCap);

/// Radii at which the covering problem can change: im d, 2·im d and the
/// midpoints between consecutive values of their union (positive only).
std::vector<Value> critical_radii(const DistanceMatrix& m);

struct AnalysisOptions {
    std::size_t bruteforce_cap = kDefaultBruteForceCap;
    std::size_t l_max = kDefaultLagMax;
};

struct AnalysisReport {
    Verdict totally_bounded;
    Verdict separable;
    PositionCounts positions;
    Verdict discrete;
    Verdict perfect;
    Isolation isolated;
    OffspringProfile offspring;
    std::size_t doubling_necessary_bound = 0;
    std::optional<DoublingBound> doubling_sufficient;
    std::optional<std::size_t> doubling_bruteforce;
    std::optional<std::size_t> horizon;
    /// M <= brute force <= sufficient constant, when both are present.
    bool sandwich_holds = true;
};

AnalysisReport analyze(const PrunedTree& t, const RadiusSchedule& s, const AnalysisOptions& options = {});
/// Builds the representing tree of m and analyzes it, including the
/// brute-force doubling constant (subject to the cap).
AnalysisReport analyze(const DistanceMatrix& m, const AnalysisOptions& options = {});

}  // namespace ultratree
