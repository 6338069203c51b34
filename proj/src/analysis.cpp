#include "ultratree/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>

#include "ultratree/errors.hpp"
#include "ultratree/represent.hpp"

namespace ultratree {

namespace {

struct Request {
    BallRequest req;
    PointSet members;
    Value diam;
};

// Breadth-first walk of a generator tree down to its horizon. `visit` sees
// every position of depth < h together with its enumerated children.
// Overflowing positions are reported and not expanded.
struct Walk {
    std::vector<std::size_t> counts;  // positions per depth 0..h
    std::optional<Position> overflow_at;
};

Walk walk_generator(const PrunedTree& t,
                    const std::function<void(const Position&, const ChildEnumeration&)>& visit = {}) {
    const std::size_t h = t.require_horizon();
    Walk w;
    std::vector<Position> level{Position{}};
    w.counts.push_back(1);
    for (std::size_t depth = 0; depth < h; ++depth) {
        std::vector<Position> next;
        for (const auto& p : level) {
            const ChildEnumeration e = t.enumerate_children(p);
            if (visit) visit(p, e);
            if (e.overflow) {
                if (!w.overflow_at) w.overflow_at = p;
                continue;
            }
            for (Label l : e.labels) {
                Position q = p;
                q.push_back(l);
                next.push_back(std::move(q));
            }
        }
        level = std::move(next);
        w.counts.push_back(level.size());
    }
    return w;
}

std::size_t explicit_offspring(const PrunedTree::Node& n) { return n.stalk ? 1 : n.children.size(); }

}  // namespace

std::vector<BallRequest> vitali_select(const DistanceMatrix& m, std::span<const BallRequest> requests) {
    if (!validate(m).is_ultrametric) throw NotUltrametricError("vitali_select requires an ultrametric input");
    std::map<PointSet, Request> by_members;
    for (const auto& r : requests) {
        if (r.center >= m.size()) throw std::out_of_range("ball center out of range");
        if (!(r.radius > 0)) throw std::invalid_argument("ball radius must be positive");
        PointSet members = open_ball(m, r.center, r.radius).members;
        auto it = by_members.find(members);
        if (it == by_members.end()) {
            const Value d = diam(m, members);
            by_members.emplace(members, Request{r, members, d});
        } else if (r < it->second.req) {
            it->second.req = r;
        }
    }
    std::vector<Request> order;
    for (auto& [members, r] : by_members) order.push_back(std::move(r));
    std::sort(order.begin(), order.end(), [](const Request& a, const Request& b) {
        if (a.diam != b.diam) return a.diam > b.diam;
        return a.members.front() < b.members.front();
    });
    std::vector<bool> covered(m.size(), false);
    std::vector<BallRequest> kept;
    for (const auto& r : order) {
        if (std::any_of(r.members.begin(), r.members.end(), [&](PointIndex x) { return covered[x]; })) continue;
        for (PointIndex x : r.members) covered[x] = true;
        kept.push_back(r.req);
    }
    return kept;
}

OffspringProfile max_offspring(const PrunedTree& t) {
    OffspringProfile out;
    if (t.is_explicit()) {
        out.per_level.assign(t.max_depth() + 1, 0);
        for (const auto& n : t.nodes())
            out.per_level[n.depth] = std::max(out.per_level[n.depth], explicit_offspring(n));
        // Stalks keep one offspring at every deeper level.
        for (std::size_t k = 1; k < out.per_level.size(); ++k)
            out.per_level[k] = std::max<std::size_t>(out.per_level[k], 1);
    } else {
        const std::size_t h = t.require_horizon();
        out.exact = false;
        out.horizon = h;
        out.per_level.assign(h, 0);
        const Walk w = walk_generator(t, [&](const Position& p, const ChildEnumeration& e) {
            out.per_level[p.size()] = std::max(out.per_level[p.size()], e.labels.size() + (e.overflow ? 1 : 0));
        });
        out.overflow_at = w.overflow_at;
    }
    for (std::size_t v : out.per_level) out.max = std::max(out.max, v);
    return out;
}

Verdict is_totally_bounded(const PrunedTree& t) {
    Verdict v;
    if (t.is_explicit()) return v;
    const OffspringProfile p = max_offspring(t);
    v.exact = false;
    v.horizon = p.horizon;
    if (p.overflow_at) {
        v.value = false;
        v.witness = p.overflow_at;
    }
    return v;
}

PositionCounts count_positions(const PrunedTree& t) {
    PositionCounts out;
    if (t.is_explicit()) {
        const std::size_t depth = t.max_depth();
        std::vector<std::size_t> nodes_at(depth + 1, 0), stalks_at(depth + 1, 0);
        for (const auto& n : t.nodes()) {
            ++nodes_at[n.depth];
            if (n.stalk) ++stalks_at[n.depth];
        }
        std::size_t stalks_above = 0;
        for (std::size_t k = 0; k <= depth; ++k) {
            out.per_level.push_back(nodes_at[k] + stalks_above);
            stalks_above += stalks_at[k];
        }
        out.tail_count = stalks_above;
        return out;
    }
    const Walk w = walk_generator(t);
    out.per_level = w.counts;
    out.exact = false;
    out.horizon = t.horizon();
    out.overflow_at = w.overflow_at;
    return out;
}

Verdict is_separable(const PrunedTree& t) {
    Verdict v;
    if (t.is_explicit()) return v;
    const PositionCounts c = count_positions(t);
    v.exact = false;
    v.horizon = c.horizon;
    if (c.overflow_at) {
        v.value = false;
        v.witness = c.overflow_at;
    }
    return v;
}

Isolation isolated_branches(const PrunedTree& t) {
    Isolation out;
    const Canopy c = canopy(t);
    out.probed = c.branches.size();
    if (t.is_explicit()) {
        out.isolated = c.branches;
        return out;
    }
    out.exact = false;
    out.horizon = c.horizon;
    for (const auto& b : c.branches) {
        const ChildEnumeration e = t.enumerate_children(b.prefix);
        if (!e.overflow && e.labels.size() == 1) out.isolated.push_back(b);
    }
    return out;
}

Verdict is_discrete(const PrunedTree& t) {
    const Isolation iso = isolated_branches(t);
    Verdict v{iso.isolated.size() == iso.probed, iso.exact, iso.horizon, std::nullopt};
    if (!v.value) {
        const Canopy c = canopy(t);
        for (const auto& b : c.branches)
            if (!std::binary_search(iso.isolated.begin(), iso.isolated.end(), b)) {
                v.witness = b.prefix;
                break;
            }
    }
    return v;
}

Verdict is_perfect(const PrunedTree& t) {
    const Isolation iso = isolated_branches(t);
    Verdict v{iso.isolated.empty(), iso.exact, iso.horizon, std::nullopt};
    if (!v.value) v.witness = iso.isolated.front().prefix;
    return v;
}

bool doubling_necessary(const PrunedTree& t, std::size_t D) {
    const OffspringProfile p = max_offspring(t);
    return !p.overflow_at && p.max <= D;
}

std::optional<DoublingBound> doubling_sufficient(const PrunedTree& t, const RadiusSchedule& s, std::size_t l_max) {
    const OffspringProfile offspring = max_offspring(t);
    if (offspring.overflow_at) return std::nullopt;

    if (t.is_explicit()) {
        std::size_t k1 = 0;
        for (const auto& n : t.nodes())
            if (explicit_offspring(n) > 1) k1 = std::max(k1, n.depth + 1);
        return DoublingBound{canopy(t).branches.size(), 1, k1, std::nullopt, true, std::nullopt};
    }

    const std::size_t h = *offspring.horizon;
    const auto& per_level = offspring.per_level;
    std::size_t k1 = h;
    while (k1 > 0 && per_level[k1 - 1] == 1) --k1;
    if (k1 < h) {
        const PositionCounts counts = count_positions(t);
        return DoublingBound{counts.per_level[k1], 1, k1, std::nullopt, false, h};
    }

    if (!s.is_generated()) return std::nullopt;
    const std::size_t sh = *s.horizon();
    for (std::size_t l = 0; l <= l_max; ++l) {
        bool ok = true;
        for (std::size_t k = 0; k <= sh && ok; ++k) ok = s[k] >= 2 * s[k + l];
        if (!ok) continue;
        std::size_t constant = 1;
        for (std::size_t i = 0; i <= l; ++i) constant *= offspring.max;
        return DoublingBound{constant, 2, std::nullopt, l, false, h};
    }
    return std::nullopt;
}

std::vector<Value> critical_radii(const DistanceMatrix& m) {
    std::vector<Value> base;
    for (Value v : m.values())
        if (v > 0) {
            base.push_back(v);
            base.push_back(2 * v);
        }
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    std::vector<Value> out = base;
    for (std::size_t i = 0; i + 1 < base.size(); ++i) out.push_back((base[i] + base[i + 1]) / 2);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

using Mask = std::uint32_t;

// Smallest number of masks from `candidates` whose union contains `target`.
std::size_t min_cover(Mask target, const std::vector<Mask>& candidates) {
    std::size_t best = static_cast<std::size_t>(std::popcount(target));  // singletons always exist
    std::function<void(Mask, std::size_t)> search = [&](Mask uncovered, std::size_t used) {
        if (uncovered == 0) {
            best = std::min(best, used);
            return;
        }
        if (used + 1 >= best) return;
        const Mask lowest = uncovered & (~uncovered + 1);
        for (Mask c : candidates)
            if (c & lowest) search(uncovered & ~c, used + 1);
    };
    search(target, 0);
    return best;
}

}  // namespace

std::size_t doubling_bruteforce(const DistanceMatrix& m, std::size_t cap) {
    const std::size_t n = m.size();
    if (n > cap || n > 32) throw CapExceededError("brute-force doubling limited to " + std::to_string(cap) + " points");
    auto mask_of = [&](PointIndex c, Value r) {
        Mask mask = 0;
        for (PointIndex y = 0; y < n; ++y)
            if (m(c, y) <= r) mask |= Mask{1} << y;
        return mask;
    };
    std::size_t D = 1;
    for (Value r : critical_radii(m)) {
        std::vector<Mask> halves;
        for (PointIndex y = 0; y < n; ++y) halves.push_back(mask_of(y, r / 2));
        std::sort(halves.begin(), halves.end());
        halves.erase(std::unique(halves.begin(), halves.end()), halves.end());
        for (PointIndex x = 0; x < n; ++x) {
            const Mask target = mask_of(x, r);
            std::vector<Mask> relevant;
            for (Mask c : halves)
                if (c & target) relevant.push_back(c);
            D = std::max(D, min_cover(target, relevant));
        }
    }
    return D;
}

AnalysisReport analyze(const PrunedTree& t, const RadiusSchedule& s, const AnalysisOptions& options) {
    AnalysisReport r;
    r.horizon = t.horizon();
    r.totally_bounded = is_totally_bounded(t);
    r.positions = count_positions(t);
    r.separable = is_separable(t);
    r.isolated = isolated_branches(t);
    r.discrete = is_discrete(t);
    r.perfect = is_perfect(t);
    r.offspring = max_offspring(t);
    r.doubling_necessary_bound = r.offspring.max;
    r.doubling_sufficient = doubling_sufficient(t, s, options.l_max);
    if (r.doubling_sufficient) r.sandwich_holds = r.doubling_necessary_bound <= r.doubling_sufficient->constant;
    return r;
}

AnalysisReport analyze(const DistanceMatrix& m, const AnalysisOptions& options) {
    if (m.size() > options.bruteforce_cap)
        throw CapExceededError("brute-force doubling limited to " + std::to_string(options.bruteforce_cap) +
                               " points");
    const Representation rep = build(m);
    AnalysisReport r = analyze(*rep.tree.tree, rep.tree.schedule, options);
    r.doubling_bruteforce = doubling_bruteforce(m, options.bruteforce_cap);
    r.sandwich_holds = r.doubling_necessary_bound <= *r.doubling_bruteforce &&
                       (!r.doubling_sufficient || *r.doubling_bruteforce <= r.doubling_sufficient->constant);
    return r;
}

}  // namespace ultratree
