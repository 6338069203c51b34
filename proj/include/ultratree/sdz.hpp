#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ultratree/metric.hpp"

namespace ultratree {

/// The radius sequence (r_k) of an SDZ ultrametric: strictly decreasing while
/// positive. Either a finite positive prefix followed by an implicit zero tail,
/// or a positive generator that is only trusted up to a depth horizon.
class RadiusSchedule {
public:
    using Generator = std::function<Value(std::size_t)>;

    /// Throws std::invalid_argument unless radii are positive and strictly decreasing.
    static RadiusSchedule finite(std::vector<Value> positive_radii);
    /// The generator must return positive, strictly decreasing values; this is
    /// checked for k <= horizon.
    static RadiusSchedule generated(Generator radius, std::size_t horizon);

    /// r_k. Zero past the positive prefix of a finite schedule.
    Value operator[](std::size_t k) const;

    bool has_zero_tail() const { return !generator_; }
    bool is_generated() const { return static_cast<bool>(generator_); }
    std::optional<std::size_t> horizon() const { return horizon_; }
    /// Finite: the whole positive prefix. Generated: r_0..r_horizon.
    const std::vector<Value>& positive_radii() const { return radii_; }
    /// Index of the first zero radius (finite schedules only).
    std::size_t first_zero_index() const;

    friend bool operator==(const RadiusSchedule& a, const RadiusSchedule& b) {
        return a.is_generated() == b.is_generated() && a.radii_ == b.radii_ && a.horizon_ == b.horizon_;
    }

private:
    std::vector<Value> radii_;
    Generator generator_;
    std::optional<std::size_t> horizon_;
};

/// A finite set is SDZ iff it is bounded and its minimum is 0.
bool check_sdz(std::span<const Value> a);

/// 1 for x >= 1, 0 for x = 0, otherwise the largest power 2^-k (k >= 1) with
/// 2^-k <= x. Exact: uses the binary exponent, not a floating logarithm.
Value g_round(Value x);

/// Entrywise g_round. Throws NotUltrametricError if m is not ultrametric.
DistanceMatrix coerce_sdz(const DistanceMatrix& m);

/// Distinct positive values of im d in decreasing order, then zeros.
/// Throws NotSdzError if im d is not SDZ.
RadiusSchedule radius_schedule(const DistanceMatrix& m);

/// r* = max(im d ∩ [0, r)), with B(x, r) = B̄(x, r*) checked. Requires r > 0.
Value open_equals_closed(const DistanceMatrix& m, PointIndex x, Value r);

/// ρ > r with B̄(x, r) = B(x, ρ) checked. ρ is the midpoint between r and the
/// next larger value of im d; past max im d it is 2r (1 if r = 0 = max im d).
Value closed_equals_open(const DistanceMatrix& m, PointIndex x, Value r);

/// Order type of a finite value set, i.e. its number of distinct elements.
std::size_t order_type(std::span<const Value> a);

}  // namespace ultratree
