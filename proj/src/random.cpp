#include "ultratree/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ultratree {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("empty range");
    const std::uint64_t limit = rng.max() - rng.max() % bound;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return x % bound;
}

namespace {

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

std::vector<Value> sample_radii(std::size_t levels, RadiusKind kind, std::mt19937_64& rng) {
    std::vector<Value> radii;
    while (radii.size() < levels) {
        Value r;
        if (kind == RadiusKind::dyadic) {
            r = static_cast<Value>(1 + uniform_below(rng, 1024)) / 256;
        } else {
            const Value u = std::ldexp(static_cast<Value>(rng() >> 11), -53);
            r = 0.001 + 9.998 * u;
        }
        const bool close = std::any_of(radii.begin(), radii.end(),
                                       [&](Value s) { return std::abs(s - r) <= 1e-6 * std::max(s, r); });
        if (!close) radii.push_back(r);
    }
    std::sort(radii.begin(), radii.end(), std::greater<>());
    return radii;
}

}  // namespace

DistanceMatrix random_ultrametric(std::size_t n, std::size_t levels, std::uint64_t seed, RadiusKind kind) {
    if (n == 0 || levels == 0) throw std::invalid_argument("random_ultrametric needs n >= 1 and levels >= 1");
    std::mt19937_64 rng(seed);
    const std::vector<Value> radii = sample_radii(levels, kind, rng);

    std::vector<Value> d(n * n, 0);
    std::vector<std::vector<std::size_t>> groups{std::vector<std::size_t>(n)};
    std::iota(groups[0].begin(), groups[0].end(), std::size_t{0});
    for (std::size_t level = 0; level < levels; ++level) {
        const bool last = level + 1 == levels;
        std::vector<std::vector<std::size_t>> next;
        for (auto& g : groups) {
            if (g.size() == 1) {
                next.push_back(std::move(g));
                continue;
            }
            const std::size_t parts = last ? g.size() : 1 + uniform_below(rng, std::min<std::size_t>(g.size(), 4));
            shuffle(g, rng);
            std::vector<std::size_t> cuts(g.size() - 1);
            std::iota(cuts.begin(), cuts.end(), std::size_t{1});
            shuffle(cuts, rng);
            cuts.resize(parts - 1);
            cuts.push_back(0);
            cuts.push_back(g.size());
            std::sort(cuts.begin(), cuts.end());
            std::vector<std::size_t> part_of(g.size());
            for (std::size_t p = 0; p + 1 < cuts.size(); ++p)
                for (std::size_t i = cuts[p]; i < cuts[p + 1]; ++i) part_of[i] = p;
            for (std::size_t i = 0; i < g.size(); ++i)
                for (std::size_t j = 0; j < g.size(); ++j)
                    if (part_of[i] != part_of[j]) d[g[i] * n + g[j]] = radii[level];
            for (std::size_t p = 0; p + 1 < cuts.size(); ++p)
                next.emplace_back(g.begin() + static_cast<std::ptrdiff_t>(cuts[p]),
                                  g.begin() + static_cast<std::ptrdiff_t>(cuts[p + 1]));
        }
        groups = std::move(next);
    }

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    shuffle(perm, rng);
    std::vector<Value> out(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[perm[i] * n + perm[j]] = d[i * n + j];
    return DistanceMatrix(DistanceMatrix::default_labels(n), std::move(out),
                          std::vector<bool>(n * n, kind == RadiusKind::dyadic));
}

}  // namespace ultratree
