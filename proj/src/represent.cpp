#include "ultratree/represent.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ultratree/errors.hpp"
#include "ultratree/format.hpp"

namespace ultratree {

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // The smaller index becomes the root, so roots are canonical ball labels.
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::vector<std::size_t> parent_;
};

struct Pair {
    Value d;
    PointIndex i, j;
};

}  // namespace

Representation build(const DistanceMatrix& m) {
    if (!validate(m).is_ultrametric) throw NotUltrametricError("build requires an ultrametric input");
    RadiusSchedule schedule = radius_schedule(m);
    const std::size_t n = m.size();
    const std::size_t levels = std::max<std::size_t>(schedule.first_zero_index(), 1);

    std::vector<Pair> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (PointIndex i = 0; i < n; ++i)
        for (PointIndex j = i + 1; j < n; ++j) pairs.push_back({m(i, j), i, j});
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.d < b.d; });

    // label[k][x]: smallest index of the closed ball of radius r_k around x.
    // Levels are filled finest first, merging pairs in increasing distance.
    std::vector<std::vector<Label>> label(levels + 1, std::vector<Label>(n));
    UnionFind uf(n);
    std::size_t next_pair = 0;
    for (std::size_t k = levels; k >= 1; --k) {
        const Value r = schedule[k];
        while (next_pair < pairs.size() && pairs[next_pair].d <= r) {
            uf.unite(pairs[next_pair].i, pairs[next_pair].j);
            ++next_pair;
        }
        for (PointIndex x = 0; x < n; ++x) label[k][x] = static_cast<Label>(uf.find(x));
    }

    RepresentingTree rt{nullptr, schedule, levels, m.labels(), {}};

    PrunedTree::Builder builder;
    std::map<std::pair<std::size_t, Label>, std::size_t> node_of;
    for (std::size_t k = 1; k <= levels; ++k) {
        for (PointIndex x = 0; x < n; ++x) {
            const Label l = label[k][x];
            rt.ball_of[{k, l}].push_back(x);
            if (node_of.count({k, l})) continue;
            const std::size_t parent = k == 1 ? PrunedTree::Builder::root() : node_of.at({k - 1, label[k - 1][x]});
            node_of[{k, l}] = builder.add_child(parent, l);
        }
    }
    for (const auto& [key, id] : node_of)
        if (key.first == levels) builder.mark_stalk(id);
    auto tree = std::make_shared<const PrunedTree>(std::move(builder).build());

    std::vector<Branch> phi(n);
    for (PointIndex x = 0; x < n; ++x) {
        phi[x].stalk = true;
        for (std::size_t k = 1; k <= levels; ++k) phi[x].prefix.push_back(label[k][x]);
    }
    rt.tree = tree;
    CladeSpace clade(tree, phi);
    return Representation{std::move(rt), RepresentedClade{std::move(clade), std::move(phi)}};
}

Value d_T(const RepresentingTree& rt, const Branch& a, const Branch& b) {
    if (!is_branch_of(*rt.tree, a) || !is_branch_of(*rt.tree, b))
        throw std::invalid_argument("d_T: branch does not belong to the representing tree");
    const auto k = first_difference(*rt.tree, a, b);
    return k ? rt.schedule[*k] : Value{0};
}

IsometryCheck verify_isometry(const DistanceMatrix& m, const Representation& rep) {
    IsometryCheck out;
    const auto& phi = rep.clade.phi;
    const std::set<Branch> image(phi.begin(), phi.end());
    const std::set<Branch> members(rep.clade.clade.members().begin(), rep.clade.clade.members().end());
    out.bijective = phi.size() == m.size() && image.size() == phi.size() && image == members;
    for (PointIndex x = 0; x < m.size() && out.ok; ++x)
        for (PointIndex y = x + 1; y < m.size(); ++y)
            if (d_T(rep.tree, phi[x], phi[y]) != m(x, y)) {
                out.ok = false;
                out.failing_pair = {x, y};
                break;
            }
    out.ok = out.ok && out.bijective;
    return out;
}

IsometryCheck verify_isometry(const DistanceMatrix& m) { return verify_isometry(m, build(m)); }

Completion completion(const PrunedTree& t, const CladeSpace& p) {
    Completion out;
    const Canopy full = canopy(t);
    out.exact = full.exact;
    out.horizon = full.horizon;
    std::set<Branch> covered;
    if (t.is_explicit()) {
        for (const auto& m : p.members()) covered.insert(normalize(t, m));
    } else {
        const std::size_t h = *full.horizon;
        for (const auto& m : p.members()) {
            if (!m.stalk && m.prefix.size() < h) continue;  // not resolved at the horizon
            covered.insert(Branch{expand(t, m, h), false});
        }
    }
    for (const auto& b : full.branches)
        if (!covered.count(b)) out.added.push_back(b);
    out.is_complete = out.added.empty();
    return out;
}

namespace {

std::string quote_label(const std::string& s) {
    if (s.find_first_of(" ()[]':;,\t") == std::string::npos && !s.empty()) return s;
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += '\'';
        out += c;
    }
    return out + "'";
}

std::string newick_node(const RepresentingTree& rt, std::size_t node, Value default_length) {
    const auto& nodes = rt.tree->nodes();
    const auto& s = rt.schedule;
    auto edge = [&](std::size_t id) {
        const std::size_t k = nodes[id].depth;
        return s.first_zero_index() == 0 ? default_length : s[k - 1] - s[k];
    };
    Value length = edge(node);
    std::size_t cur = node;
    while (!nodes[cur].stalk && nodes[cur].children.size() == 1) {
        cur = nodes[cur].children.front();
        length += edge(cur);
    }
    std::string text;
    if (nodes[cur].stalk) {
        const PointSet& ball = rt.members(nodes[cur].depth, nodes[cur].label);
        text = quote_label(rt.point_labels.at(ball.front()));
    } else {
        text = "(";
        for (std::size_t i = 0; i < nodes[cur].children.size(); ++i) {
            if (i) text += ",";
            text += newick_node(rt, nodes[cur].children[i], default_length);
        }
        text += ")";
    }
    return text + ":" + format_value(length);
}

}  // namespace

std::string export_newick(const RepresentingTree& rt, Value default_length) {
    const auto& root = rt.tree->nodes().front();
    std::string text = "(";
    for (std::size_t i = 0; i < root.children.size(); ++i) {
        if (i) text += ",";
        text += newick_node(rt, root.children[i], default_length);
    }
    return text + ");";
}

}  // namespace ultratree
