#include "ultratree/tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

#include "ultratree/errors.hpp"

namespace ultratree {

namespace {

std::vector<Label> sorted_unique(std::vector<Label> labels) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

Position strip_stalk_suffix(Position p) {
    while (!p.empty() && p.back() == kStalkLabel) p.pop_back();
    return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// Builder

PrunedTree::Builder::Builder() { nodes_.push_back(Node{}); }

std::size_t PrunedTree::Builder::add_child(std::size_t parent, Label label) {
    if (parent >= nodes_.size()) throw std::out_of_range("unknown parent node");
    if (label < 0) throw std::invalid_argument("explicit tree labels must be nonnegative");
    if (nodes_[parent].stalk) throw std::invalid_argument("stalk nodes cannot have explicit children");
    for (std::size_t c : nodes_[parent].children)
        if (nodes_[c].label == label) throw std::invalid_argument("duplicate sibling label " + std::to_string(label));
    Node n;
    n.label = label;
    n.parent = parent;
    n.depth = nodes_[parent].depth + 1;
    nodes_.push_back(std::move(n));
    const std::size_t id = nodes_.size() - 1;
    nodes_[parent].children.push_back(id);
    return id;
}

void PrunedTree::Builder::mark_stalk(std::size_t node) {
    if (node >= nodes_.size()) throw std::out_of_range("unknown node");
    if (!nodes_[node].children.empty()) throw std::invalid_argument("stalk nodes cannot have explicit children");
    nodes_[node].stalk = true;
}

PrunedTree PrunedTree::Builder::build() && {
    for (auto& n : nodes_) {
        if (!n.stalk && n.children.empty()) throw std::invalid_argument("tree is not pruned: leaf without stalk");
        std::sort(n.children.begin(), n.children.end(),
                  [this](std::size_t a, std::size_t b) { return nodes_[a].label < nodes_[b].label; });
    }
    PrunedTree t;
    t.nodes_ = std::move(nodes_);
    return t;
}

// ---------------------------------------------------------------------------
// PrunedTree

PrunedTree PrunedTree::generator(ChildFn children, std::optional<std::size_t> horizon, std::size_t child_cap) {
    if (!children) throw std::invalid_argument("empty child function");
    if (child_cap == 0) throw std::invalid_argument("child cap must be positive");
    if (horizon && *horizon == 0) throw std::invalid_argument("horizon must be at least 1");
    PrunedTree t;
    t.child_fn_ = std::move(children);
    t.horizon_ = horizon;
    t.child_cap_ = child_cap;
    return t;
}

std::size_t PrunedTree::require_horizon() const {
    if (!horizon_) throw HorizonRequiredError("generator tree has no depth horizon");
    return *horizon_;
}

std::optional<std::size_t> PrunedTree::find(std::span<const Label> p) const {
    if (!is_explicit()) throw std::logic_error("find() is only defined for explicit trees");
    std::size_t cur = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Node& n = nodes_[cur];
        if (n.stalk) {
            if (p[i] != kStalkLabel) return std::nullopt;
            continue;
        }
        auto it = std::lower_bound(n.children.begin(), n.children.end(), p[i],
                                   [this](std::size_t c, Label l) { return nodes_[c].label < l; });
        if (it == n.children.end() || nodes_[*it].label != p[i]) return std::nullopt;
        cur = *it;
    }
    return cur;
}

Position PrunedTree::path_of(std::size_t node) const {
    Position p(nodes_.at(node).depth);
    for (std::size_t cur = node; cur != 0; cur = nodes_[cur].parent) p[nodes_[cur].depth - 1] = nodes_[cur].label;
    return p;
}

std::size_t PrunedTree::max_depth() const {
    std::size_t d = 0;
    for (const auto& n : nodes_) d = std::max(d, n.depth);
    return d;
}

bool PrunedTree::contains(std::span<const Label> p) const {
    if (is_explicit()) return find(p).has_value();
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto labels = child_fn_(p.first(i), child_cap_);
        const bool overflow = labels.size() > child_cap_;
        if (!overflow && std::find(labels.begin(), labels.end(), p[i]) == labels.end()) return false;
        if (p[i] == kStalkLabel) return false;
    }
    return true;
}

ChildEnumeration PrunedTree::enumerate_children(std::span<const Label> p) const {
    if (!contains(p)) throw std::invalid_argument("not a position of the tree");
    ChildEnumeration out;
    if (is_explicit()) {
        const Node& n = nodes_[*find(p)];
        if (n.stalk) {
            out.labels = {kStalkLabel};
        } else {
            for (std::size_t c : n.children) out.labels.push_back(nodes_[c].label);
        }
        return out;
    }
    auto labels = child_fn_(p, child_cap_);
    if (labels.size() > child_cap_) {
        out.overflow = true;
        labels.resize(child_cap_);
    }
    out.labels = sorted_unique(std::move(labels));
    if (out.labels.empty()) throw std::logic_error("generator tree is not pruned: position without children");
    return out;
}

std::vector<Label> PrunedTree::children(std::span<const Label> p) const {
    auto e = enumerate_children(p);
    if (e.overflow) throw CapExceededError("child enumeration exceeded the cap");
    return std::move(e.labels);
}

namespace {

bool same_subtree(const PrunedTree& a, std::size_t na, const PrunedTree& b, std::size_t nb) {
    const auto& x = a.nodes()[na];
    const auto& y = b.nodes()[nb];
    if (x.stalk != y.stalk || x.children.size() != y.children.size()) return false;
    for (std::size_t i = 0; i < x.children.size(); ++i) {
        if (a.nodes()[x.children[i]].label != b.nodes()[y.children[i]].label) return false;
        if (!same_subtree(a, x.children[i], b, y.children[i])) return false;
    }
    return true;
}

void copy_below(const PrunedTree& src, std::size_t node, PrunedTree::Builder& dst, std::size_t at) {
    const auto& n = src.nodes()[node];
    if (n.stalk) {
        dst.mark_stalk(at);
        return;
    }
    for (std::size_t c : n.children) copy_below(src, c, dst, dst.add_child(at, src.nodes()[c].label));
}

}  // namespace

bool operator==(const PrunedTree& a, const PrunedTree& b) {
    if (!a.is_explicit() || !b.is_explicit()) return false;
    return same_subtree(a, 0, b, 0);
}

// ---------------------------------------------------------------------------
// Subtrees, canopies, branches

PrunedTree subtree_at(const PrunedTree& t, std::span<const Label> p) {
    if (!t.contains(p)) throw std::invalid_argument("subtree_at: not a position of the tree");
    if (t.is_explicit()) {
        const std::size_t node = *t.find(p);
        const Position path = t.path_of(node);
        PrunedTree::Builder b;
        std::size_t at = PrunedTree::Builder::root();
        for (Label l : path) at = b.add_child(at, l);
        copy_below(t, node, b, at);
        return std::move(b).build();
    }
    Position anchor(p.begin(), p.end());
    ChildFn fn = [inner = t.child_function(), anchor](std::span<const Label> path,
                                                       std::size_t limit) -> std::vector<Label> {
        if (path.size() < anchor.size() && std::equal(path.begin(), path.end(), anchor.begin()))
            return {anchor[path.size()]};
        return inner(path, limit);
    };
    return PrunedTree::generator(std::move(fn), t.horizon(), t.child_cap());
}

Canopy canopy(const PrunedTree& t) {
    Canopy c;
    if (t.is_explicit()) {
        for (std::size_t i = 0; i < t.nodes().size(); ++i)
            if (t.nodes()[i].stalk) c.branches.push_back(Branch{t.path_of(i), true});
        std::sort(c.branches.begin(), c.branches.end());
        return c;
    }
    const std::size_t h = t.require_horizon();
    std::vector<Position> level{Position{}};
    for (std::size_t depth = 0; depth < h; ++depth) {
        std::vector<Position> next;
        for (const auto& p : level) {
            for (Label l : t.children(p)) {
                Position q = p;
                q.push_back(l);
                next.push_back(std::move(q));
            }
        }
        level = std::move(next);
    }
    for (auto& p : level) c.branches.push_back(Branch{std::move(p), false});
    std::sort(c.branches.begin(), c.branches.end());
    c.exact = false;
    c.horizon = h;
    return c;
}

Branch normalize(const PrunedTree& t, const Branch& b) {
    if (!t.is_explicit()) {
        if (!t.contains(b.prefix)) throw std::invalid_argument("branch prefix is not a position");
        return b;
    }
    if (!b.stalk) throw std::invalid_argument("explicit tree branches are stalk-terminated");
    const Position prefix = strip_stalk_suffix(b.prefix);
    auto node = t.find(prefix);
    if (!node) throw std::invalid_argument("branch prefix is not a position");
    std::size_t cur = *node;
    while (!t.nodes()[cur].stalk) {
        const auto& ch = t.nodes()[cur].children;
        if (ch.size() != 1) throw std::invalid_argument("branch tail passes a position with several children");
        cur = ch.front();
    }
    return Branch{t.path_of(cur), true};
}

bool is_branch_of(const PrunedTree& t, const Branch& b) {
    try {
        if (t.is_explicit()) {
            normalize(t, b);
            return true;
        }
        if (!t.contains(b.prefix)) return false;
        if (b.stalk && t.horizon() && b.prefix.size() < *t.horizon()) expand(t, b, *t.horizon());
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

Position expand(const PrunedTree& t, const Branch& b, std::size_t depth) {
    if (t.is_explicit()) {
        Position p = normalize(t, b).prefix;
        p.resize(depth, kStalkLabel);
        return p;
    }
    Position p(b.prefix.begin(), b.prefix.begin() + static_cast<std::ptrdiff_t>(std::min(depth, b.prefix.size())));
    if (p.size() == depth) return p;
    if (!b.stalk) throw HorizonRequiredError("branch is only known up to its prefix");
    while (p.size() < depth) {
        auto ch = t.children(p);
        if (ch.size() != 1) throw std::invalid_argument("branch tail passes a position with several children");
        p.push_back(ch.front());
    }
    return p;
}

std::optional<std::size_t> first_difference(const PrunedTree& t, const Branch& x, const Branch& y) {
    if (t.is_explicit()) {
        const Branch a = normalize(t, x);
        const Branch b = normalize(t, y);
        const std::size_t len = std::max(a.prefix.size(), b.prefix.size()) + 1;
        const Position ea = expand(t, a, len);
        const Position eb = expand(t, b, len);
        auto mm = std::mismatch(ea.begin(), ea.end(), eb.begin());
        if (mm.first == ea.end()) return std::nullopt;
        return static_cast<std::size_t>(mm.first - ea.begin());
    }
    if (!x.stalk && !y.stalk && x.prefix == y.prefix) return std::nullopt;
    const std::size_t longest = std::max(x.prefix.size(), y.prefix.size());
    std::size_t len = longest;
    if (!x.stalk) len = std::min(len, x.prefix.size());
    if (!y.stalk) len = std::min(len, y.prefix.size());
    const Position ea = expand(t, x, len);
    const Position eb = expand(t, y, len);
    auto mm = std::mismatch(ea.begin(), ea.end(), eb.begin());
    if (mm.first != ea.end()) return static_cast<std::size_t>(mm.first - ea.begin());
    // Two stalk branches that agree past both prefixes sit on the same chain.
    if (x.stalk && y.stalk) return std::nullopt;
    throw HorizonRequiredError("branches agree on every known entry");
}

Value d2(const PrunedTree& t, const Branch& x, const Branch& y) {
    if (!is_branch_of(t, x) || !is_branch_of(t, y)) throw std::invalid_argument("d2: branch does not belong to the tree");
    const auto k = first_difference(t, x, y);
    if (!k) return 0;
    return std::ldexp(1.0, -static_cast<int>(*k));
}

Canopy basis_ball(const PrunedTree& t, std::span<const Label> p) {
    if (!t.contains(p)) throw std::invalid_argument("basis_ball: not a position of the tree");
    if (!t.is_explicit() && p.size() > t.require_horizon())
        throw std::invalid_argument("basis_ball: position lies below the horizon");
    Canopy sub = canopy(subtree_at(t, p));
    const Canopy full = canopy(t);
    const Value radius = std::ldexp(1.0, -static_cast<int>(p.size()));
    std::vector<Branch> ball;
    for (const auto& b : full.branches)
        if (d2(t, sub.branches.front(), b) <= radius) ball.push_back(b);
    if (ball != sub.branches) throw std::logic_error("subtree canopy differs from the dyadic ball");
    return sub;
}

// ---------------------------------------------------------------------------
// Clade spaces

CladeSpace::CladeSpace(std::shared_ptr<const PrunedTree> tree, std::vector<Branch> members)
    : tree_(std::move(tree)) {
    if (!tree_) throw std::invalid_argument("clade space without a tree");
    if (members.empty()) throw std::invalid_argument("clade space must be nonempty");
    for (auto& m : members) {
        if (!is_branch_of(*tree_, m)) throw std::invalid_argument("clade member is not a branch of the tree");
        m = normalize(*tree_, m);
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    members_ = std::move(members);
}

namespace {

// Number of depth-`target` positions extending p, counting no further than `stop`.
std::size_t count_descendants(const PrunedTree& t, const Position& p, std::size_t target, std::size_t stop) {
    if (p.size() == target) return 1;
    std::size_t total = 0;
    auto e = t.enumerate_children(p);
    if (e.overflow) return stop;
    for (Label l : e.labels) {
        Position q = p;
        q.push_back(l);
        total += count_descendants(t, q, target, stop - total);
        if (total >= stop) return stop;
    }
    return total;
}

}  // namespace

bool is_subcanopy(const PrunedTree& t, const CladeSpace& p) {
    if (&t != &p.tree() && !(t.is_explicit() && t == p.tree()))
        throw std::invalid_argument("is_subcanopy: clade belongs to a different tree");
    if (t.is_explicit()) {
        PrunedTree::Builder b;
        std::map<Position, std::size_t> ids{{Position{}, PrunedTree::Builder::root()}};
        for (const auto& m : p.members()) {
            Position q;
            std::size_t at = PrunedTree::Builder::root();
            for (Label l : m.prefix) {
                q.push_back(l);
                auto it = ids.find(q);
                at = it != ids.end() ? it->second : ids.emplace(q, b.add_child(at, l)).first->second;
            }
            b.mark_stalk(at);
        }
        const Canopy closure = canopy(std::move(b).build());
        return closure.branches == p.members();
    }
    const std::size_t h = t.require_horizon();
    for (const auto& m : p.members()) {
        if (m.stalk) continue;
        // A bare prefix stands for all of its extensions.
        if (count_descendants(t, m.prefix, std::max(h, m.prefix.size() + 1), 2) > 1) return false;
    }
    return true;
}

}  // namespace ultratree
