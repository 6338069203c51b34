#include "ultratree/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

#include "ultratree/errors.hpp"

namespace ultratree {

namespace {

bool within_relative(Value a, Value b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

bool leq(Value a, Value b) { return a <= b + kInequalityTolerance * std::max(1.0, std::abs(b)); }
bool lt(Value a, Value b) { return a < b - kInequalityTolerance * std::max(1.0, std::abs(b)); }
bool approx_eq(Value a, Value b) { return leq(a, b) && leq(b, a); }

// Maps every raw off-diagonal value to a canonical representative. Exact
// values are their own representative; an inexact value within kSnapTolerance
// of an exact one snaps to it; remaining inexact values are grouped by
// chaining from the smallest member of each group.
std::vector<Value> snap(const std::vector<Value>& entries, const std::vector<bool>& exact, std::size_t n) {
    std::set<Value> exact_values;
    std::vector<Value> loose;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const std::size_t k = i * n + j;
            if (exact[k]) exact_values.insert(entries[k]);
            else loose.push_back(entries[k]);
        }
    }
    std::sort(loose.begin(), loose.end());
    loose.erase(std::unique(loose.begin(), loose.end()), loose.end());

    auto nearest_exact = [&](Value v) -> std::optional<Value> {
        auto it = exact_values.lower_bound(v);
        std::optional<Value> best;
        if (it != exact_values.end() && within_relative(*it, v, kSnapTolerance)) best = *it;
        if (it != exact_values.begin()) {
            const Value below = *std::prev(it);
            if (within_relative(below, v, kSnapTolerance) &&
                (!best || std::abs(below - v) < std::abs(*best - v)))
                best = below;
        }
        return best;
    };

    std::vector<std::pair<Value, Value>> canonical;  // raw -> representative
    canonical.reserve(loose.size());
    std::optional<Value> leader;
    for (Value v : loose) {
        if (auto e = nearest_exact(v)) {
            canonical.emplace_back(v, *e);
            continue;
        }
        if (!leader || !within_relative(*leader, v, kSnapTolerance)) leader = v;
        canonical.emplace_back(v, *leader);
    }

    std::vector<Value> out = entries;
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (k / n == k % n || exact[k]) continue;
        auto it = std::lower_bound(canonical.begin(), canonical.end(), out[k],
                                   [](const auto& p, Value v) { return p.first < v; });
        out[k] = it->second;
    }
    return out;
}

}  // namespace

std::vector<std::string> DistanceMatrix::default_labels(std::size_t n) {
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = "p" + std::to_string(i);
    return labels;
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels, std::vector<Value> entries,
                               std::vector<bool> exact) {
    if (entries.empty()) throw StructuralError(0, 0, "empty matrix");
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(entries.size()))));
    if (n * n != entries.size()) throw StructuralError(0, 0, "matrix is not square");
    if (labels.empty()) labels = default_labels(n);
    if (labels.size() != n) throw StructuralError(0, 0, "label count does not match matrix size");
    {
        std::set<std::string> seen(labels.begin(), labels.end());
        if (seen.size() != n) throw StructuralError(0, 0, "duplicate point labels");
    }
    if (exact.empty()) exact.assign(entries.size(), false);
    if (exact.size() != entries.size()) throw std::invalid_argument("exact mask shape mismatch");

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Value v = entries[i * n + j];
            if (!std::isfinite(v)) throw StructuralError(i, j, "non-finite distance");
            if (v < 0) throw StructuralError(i, j, "negative distance");
            if (i == j && v != 0) throw StructuralError(i, j, "nonzero diagonal");
            if (i != j && v == 0) throw StructuralError(i, j, "zero distance between distinct points");
        }
    }

    std::vector<Value> snapped = snap(entries, exact, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (snapped[i * n + j] != snapped[j * n + i]) throw StructuralError(i, j, "asymmetric entries");

    n_ = n;
    labels_ = std::move(labels);
    d_ = std::move(snapped);
    values_ = d_;
    std::sort(values_.begin(), values_.end());
    values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
}

DistanceMatrix DistanceMatrix::from_rows(std::vector<std::string> labels,
                                         const std::vector<std::vector<Value>>& rows) {
    const std::size_t n = rows.size();
    std::vector<Value> entries;
    entries.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw StructuralError(i, rows[i].size(), "row length differs from row count");
        entries.insert(entries.end(), rows[i].begin(), rows[i].end());
    }
    return DistanceMatrix(std::move(labels), std::move(entries));
}

std::optional<Violation> find_triangle_violation(const DistanceMatrix& m) {
    const std::size_t n = m.size();
    for (PointIndex x = 0; x < n; ++x)
        for (PointIndex y = x + 1; y < n; ++y)
            for (PointIndex z = 0; z < n; ++z) {
                if (z == x || z == y) continue;
                if (!leq(m(x, y), m(x, z) + m(z, y)))
                    return Violation{ViolationKind::triangle, x, y, z, m(x, y), m(x, z), m(z, y)};
            }
    return std::nullopt;
}

std::optional<Violation> find_strong_triangle_violation(const DistanceMatrix& m) {
    const std::size_t n = m.size();
    for (PointIndex x = 0; x < n; ++x)
        for (PointIndex y = x + 1; y < n; ++y)
            for (PointIndex z = 0; z < n; ++z) {
                if (z == x || z == y) continue;
                if (!leq(m(x, y), std::max(m(x, z), m(z, y))))
                    return Violation{ViolationKind::strong_triangle, x, y, z, m(x, y), m(x, z), m(z, y)};
            }
    return std::nullopt;
}

std::optional<Violation> find_isosceles_violation(const DistanceMatrix& m) {
    const std::size_t n = m.size();
    for (PointIndex x = 0; x < n; ++x)
        for (PointIndex y = 0; y < n; ++y)
            for (PointIndex z = 0; z < n; ++z) {
                if (x == y || y == z || x == z) continue;
                if (lt(m(x, y), m(x, z)) && !approx_eq(m(y, z), m(x, z)))
                    return Violation{ViolationKind::isosceles, x, y, z, m(x, y), m(x, z), m(z, y)};
            }
    return std::nullopt;
}

ValidationReport validate(const DistanceMatrix& m) {
    ValidationReport report;
    if (auto v = find_triangle_violation(m)) {
        report.is_metric = false;
        report.is_ultrametric = false;
        report.witness = v;
        return report;
    }
    auto strong = find_strong_triangle_violation(m);
    auto iso = strong ? std::nullopt : find_isosceles_violation(m);
    if (strong || iso) {
        report.is_ultrametric = false;
        report.witness = strong ? strong : iso;
    }
    return report;
}

Ball ball(const DistanceMatrix& m, PointIndex x, Value r, BallKind kind) {
    if (x >= m.size()) throw std::out_of_range("ball center " + std::to_string(x) + " out of range");
    if (kind == BallKind::open && !(r > 0)) throw std::invalid_argument("open ball radius must be positive");
    if (kind == BallKind::closed && !(r >= 0)) throw std::invalid_argument("closed ball radius must be nonnegative");
    Ball b{x, r, kind, {}};
    for (PointIndex y = 0; y < m.size(); ++y) {
        const Value d = m(x, y);
        if (kind == BallKind::open ? d < r : d <= r) b.members.push_back(y);
    }
    return b;
}

Value diam(const DistanceMatrix& m, std::span<const PointIndex> s) {
    if (s.empty()) throw std::invalid_argument("diam of an empty set");
    Value best = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) best = std::max(best, m(s[i], s[j]));
    return best;
}

bool is_r_separated(const DistanceMatrix& m, std::span<const PointIndex> s, Value r) {
    if (s.empty()) throw std::invalid_argument("separation of an empty set");
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (s[i] != s[j] && !(m(s[i], s[j]) > r)) return false;
    return true;
}

PointSet all_points(const DistanceMatrix& m) {
    PointSet s(m.size());
    std::iota(s.begin(), s.end(), PointIndex{0});
    return s;
}

}  // namespace ultratree
