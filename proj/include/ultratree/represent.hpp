#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultratree/metric.hpp"
#include "ultratree/sdz.hpp"
#include "ultratree/tree.hpp"

namespace ultratree {

/// Tree whose level-k positions (k >= 1) are the closed balls of radius r_k,
/// each labeled by its smallest point index. The deepest level holds the
/// singletons, each of which is a stalk node.
struct RepresentingTree {
    std::shared_ptr<const PrunedTree> tree;
    RadiusSchedule schedule;
    std::size_t levels = 0;
    std::vector<std::string> point_labels;
    std::map<std::pair<std::size_t, Label>, PointSet> ball_of;

    const PointSet& members(std::size_t level, Label label) const { return ball_of.at({level, label}); }
};

/// The clade of branches φ(x), one per point. Entry k of φ(x) is the ball of
/// radius r_{k+1} containing x.
struct RepresentedClade {
    CladeSpace clade;
    std::vector<Branch> phi;
};

struct Representation {
    RepresentingTree tree;
    RepresentedClade clade;
};

/// Throws NotUltrametricError or NotSdzError on unsuitable input.
Representation build(const DistanceMatrix& m);

/// 0 for equal branches, else r_m for the first differing entry m.
Value d_T(const RepresentingTree& rt, const Branch& a, const Branch& b);

struct IsometryCheck {
    bool ok = true;
    bool bijective = true;
    std::optional<std::pair<PointIndex, PointIndex>> failing_pair;
};

IsometryCheck verify_isometry(const DistanceMatrix& m, const Representation& rep);
IsometryCheck verify_isometry(const DistanceMatrix& m);

struct Completion {
    std::vector<Branch> added;
    bool is_complete = true;
    bool exact = true;
    std::optional<std::size_t> horizon;
};

/// Canopy branches missing from the clade. For generator trees the
/// comparison is made on positions at the horizon depth.
Completion completion(const PrunedTree& t, const CladeSpace& p);

/// Newick text with leaves named by point labels. A node at level k sits at
/// distance r_{k-1} - r_k from its parent; single-child chains are merged.
/// A one-point space uses `default_length` for its leaf.
std::string export_newick(const RepresentingTree& rt, Value default_length = 1);

}  // namespace ultratree
