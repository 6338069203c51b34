#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ultratree {

/// Distances are stored as doubles. Every value produced after SDZ coercion
/// is a dyadic rational and therefore exact in binary floating point, so
/// comparisons on coerced data are exact.
using Value = double;
using PointIndex = std::size_t;
/// Sorted ascending, no duplicates.
using PointSet = std::vector<PointIndex>;

/// Relative tolerance used to group raw real entries into one canonical value.
inline constexpr double kSnapTolerance = 1e-9;
/// Tolerance on metric inequalities for raw (uncoerced) input.
inline constexpr double kInequalityTolerance = 1e-12;

/// A finite metric space given by its distance matrix, with the exact set of
/// distinct distance values (im d, always containing 0).
class DistanceMatrix {
public:
    /// `entries` is row-major n*n. `exact` (optional, same shape) marks cells
    /// whose value must not be snapped to a nearby canonical value.
    /// Throws StructuralError on malformed input.
    DistanceMatrix(std::vector<std::string> labels, std::vector<Value> entries,
                   std::vector<bool> exact = {});

    static DistanceMatrix from_rows(std::vector<std::string> labels,
                                    const std::vector<std::vector<Value>>& rows);
    /// Labels p0, p1, ...
    static std::vector<std::string> default_labels(std::size_t n);

    std::size_t size() const { return n_; }
    Value operator()(PointIndex i, PointIndex j) const { return d_[i * n_ + j]; }
    std::span<const Value> row(PointIndex i) const { return {d_.data() + i * n_, n_}; }
    const std::vector<Value>& entries() const { return d_; }
    const std::vector<std::string>& labels() const { return labels_; }
    /// Sorted ascending distinct entries, including 0.
    const std::vector<Value>& values() const { return values_; }
    Value max_value() const { return values_.back(); }

    /// Entrywise image under `f`; f must map 0 to 0 and positives to positives.
    template <typename F>
    DistanceMatrix transformed(F&& f) const {
        std::vector<Value> out(d_.size());
        for (std::size_t k = 0; k < d_.size(); ++k) out[k] = f(d_[k]);
        return DistanceMatrix(labels_, std::move(out), std::vector<bool>(d_.size(), true));
    }

    friend bool operator==(const DistanceMatrix& a, const DistanceMatrix& b) {
        return a.labels_ == b.labels_ && a.d_ == b.d_;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::string> labels_;
    std::vector<Value> d_;
    std::vector<Value> values_;
};

enum class ViolationKind { triangle, strong_triangle, isosceles };

/// The triple (x, y, z) with the three distances involved. For the triangle
/// forms, d(x,y) exceeds the bound obtained through z. For the isosceles
/// form, d(x,y) < d(x,z) but d(y,z) != d(x,z).
struct Violation {
    ViolationKind kind;
    PointIndex x, y, z;
    Value dxy, dxz, dzy;
};

struct ValidationReport {
    bool is_metric = true;
    bool is_ultrametric = true;
    std::optional<Violation> witness;
};

std::optional<Violation> find_triangle_violation(const DistanceMatrix& m);
std::optional<Violation> find_strong_triangle_violation(const DistanceMatrix& m);
std::optional<Violation> find_isosceles_violation(const DistanceMatrix& m);

/// Metric and ultrametric check. The witness is the first triangle violation
/// when the matrix is not a metric, otherwise the first strong-triangle or
/// isosceles violation.
ValidationReport validate(const DistanceMatrix& m);

enum class BallKind { open, closed };

struct Ball {
    PointIndex center;
    Value radius;
    BallKind kind;
    PointSet members;
};

/// Open balls need r > 0, closed balls r >= 0. Members are sorted by index.
Ball ball(const DistanceMatrix& m, PointIndex x, Value r, BallKind kind);
inline Ball open_ball(const DistanceMatrix& m, PointIndex x, Value r) { return ball(m, x, r, BallKind::open); }
inline Ball closed_ball(const DistanceMatrix& m, PointIndex x, Value r) { return ball(m, x, r, BallKind::closed); }

/// Largest pairwise distance in s, 0 for a singleton. Throws on empty s.
Value diam(const DistanceMatrix& m, std::span<const PointIndex> s);

/// True iff every pair of distinct points of s is at distance > r.
bool is_r_separated(const DistanceMatrix& m, std::span<const PointIndex> s, Value r);

PointSet all_points(const DistanceMatrix& m);

}  // namespace ultratree
