#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ultratree/metric.hpp"

namespace ultratree {

using Label = std::int64_t;
/// Synthetic child label of a stalk node. Explicit trees reserve it.
inline constexpr Label kStalkLabel = -1;
inline constexpr std::size_t kDefaultChildCap = std::size_t{1} << 16;

/// Path of child labels from the root; empty is the root.
using Position = std::vector<Label>;

/// A branch of a pruned tree, stored as a finite prefix plus a tail rule.
/// With `stalk` set the branch continues through the unique child of every
/// position after the prefix. Without it only the prefix is known, which is
/// how generator trees report branches up to their horizon.
struct Branch {
    Position prefix;
    bool stalk = true;

    friend auto operator<=>(const Branch&, const Branch&) = default;
};

/// Children enumeration for generator trees. Called with a position and a
/// limit; returning more than `limit` labels signals an overflow. Must be
/// pure and must never return kStalkLabel.
using ChildFn = std::function<std::vector<Label>(std::span<const Label> path, std::size_t limit)>;

struct ChildEnumeration {
    std::vector<Label> labels;  // sorted
    bool overflow = false;
};

/// A pruned tree: every position has a strict extension. Explicit trees store
/// their nodes, with infinite single-offspring chains compressed into a
/// flagged stalk node. Generator trees compute children on demand and are
/// only explored down to a depth horizon.
class PrunedTree {
public:
    struct Node {
        Label label = 0;
        std::size_t parent = 0;
        std::size_t depth = 0;
        std::vector<std::size_t> children;  // sorted by label
        bool stalk = false;
    };

    class Builder {
    public:
        Builder();
        static constexpr std::size_t root() { return 0; }
        /// Labels must be nonnegative and unique among siblings.
        std::size_t add_child(std::size_t parent, Label label);
        void mark_stalk(std::size_t node);
        /// Throws std::invalid_argument if a non-stalk node has no children
        /// or a stalk node has explicit children.
        PrunedTree build() &&;

    private:
        std::vector<Node> nodes_;
    };

    static PrunedTree generator(ChildFn children, std::optional<std::size_t> horizon,
                                std::size_t child_cap = kDefaultChildCap);

    bool is_explicit() const { return !child_fn_; }
    std::optional<std::size_t> horizon() const { return horizon_; }
    std::size_t child_cap() const { return child_cap_; }
    const ChildFn& child_function() const { return child_fn_; }
    /// Horizon of a generator tree, throwing HorizonRequiredError if unset.
    std::size_t require_horizon() const;

    bool contains(std::span<const Label> p) const;
    /// Throws std::invalid_argument if p is not a position. Stalk positions
    /// return {kStalkLabel}. Generator overflow throws CapExceededError.
    std::vector<Label> children(std::span<const Label> p) const;
    /// Like children() but reports generator overflow instead of throwing.
    ChildEnumeration enumerate_children(std::span<const Label> p) const;

    // Explicit trees only.
    const std::vector<Node>& nodes() const { return nodes_; }
    /// Node reached by p; positions below a stalk map to the stalk node.
    std::optional<std::size_t> find(std::span<const Label> p) const;
    Position path_of(std::size_t node) const;
    std::size_t max_depth() const;

    /// Structural equality of explicit trees.
    friend bool operator==(const PrunedTree& a, const PrunedTree& b);

private:
    PrunedTree() = default;
    std::vector<Node> nodes_;
    ChildFn child_fn_;
    std::optional<std::size_t> horizon_;
    std::size_t child_cap_ = kDefaultChildCap;
};

/// Branches of a tree. Exact for explicit trees; for generator trees the
/// set of positions at the horizon depth.
struct Canopy {
    std::vector<Branch> branches;  // sorted
    bool exact = true;
    std::optional<std::size_t> horizon;
};

/// The subtree T_p: positions comparable with p.
PrunedTree subtree_at(const PrunedTree& t, std::span<const Label> p);

Canopy canopy(const PrunedTree& t);

/// Canonical form: explicit stalk branches end exactly at their stalk node.
Branch normalize(const PrunedTree& t, const Branch& b);
bool is_branch_of(const PrunedTree& t, const Branch& b);
/// First `depth` entries of b. Throws HorizonRequiredError if b is only known
/// up to a shorter prefix.
Position expand(const PrunedTree& t, const Branch& b, std::size_t depth);

/// First index at which two branches differ, nullopt if they are equal.
/// Throws HorizonRequiredError if they agree on everything known.
std::optional<std::size_t> first_difference(const PrunedTree& t, const Branch& x, const Branch& y);

/// Dyadic ultrametric: 0 if equal, else 2^-k for the first differing index k.
Value d2(const PrunedTree& t, const Branch& x, const Branch& y);

/// Canopy of T_p, checked against the closed d2 ball of radius 2^-len(p)
/// (the open ball of radius 2^(1-len(p))).
Canopy basis_ball(const PrunedTree& t, std::span<const Label> p);

/// A nonempty set of branches of one tree.
class CladeSpace {
public:
    /// Throws std::invalid_argument on an empty set or a non-branch member.
    CladeSpace(std::shared_ptr<const PrunedTree> tree, std::vector<Branch> members);

    const PrunedTree& tree() const { return *tree_; }
    const std::shared_ptr<const PrunedTree>& tree_ptr() const { return tree_; }
    const std::vector<Branch>& members() const { return members_; }

private:
    std::shared_ptr<const PrunedTree> tree_;
    std::vector<Branch> members_;
};

/// Whether the clade is the canopy of its prefix closure, i.e. closed in the
/// tree topology. For generator trees the answer holds up to the horizon:
/// a member known only by a prefix p stands for all extensions of p, so it
/// must have a single descendant at depth max(h, |p| + 1).
bool is_subcanopy(const PrunedTree& t, const CladeSpace& p);
inline bool is_subcanopy(const CladeSpace& p) { return is_subcanopy(p.tree(), p); }

}  // namespace ultratree
