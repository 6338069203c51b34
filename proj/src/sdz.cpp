#include "ultratree/sdz.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "ultratree/errors.hpp"

namespace ultratree {

RadiusSchedule RadiusSchedule::finite(std::vector<Value> positive_radii) {
    for (std::size_t k = 0; k < positive_radii.size(); ++k) {
        if (!(positive_radii[k] > 0)) throw std::invalid_argument("schedule radii must be positive");
        if (k > 0 && !(positive_radii[k] < positive_radii[k - 1]))
            throw std::invalid_argument("schedule radii must be strictly decreasing");
    }
    RadiusSchedule s;
    s.radii_ = std::move(positive_radii);
    return s;
}

RadiusSchedule RadiusSchedule::generated(Generator radius, std::size_t horizon) {
    if (!radius) throw std::invalid_argument("empty schedule generator");
    RadiusSchedule s;
    for (std::size_t k = 0; k <= horizon; ++k) {
        const Value r = radius(k);
        if (!(r > 0)) throw std::invalid_argument("generated radii must be positive");
        if (k > 0 && !(r < s.radii_.back())) throw std::invalid_argument("generated radii must be strictly decreasing");
        s.radii_.push_back(r);
    }
    s.generator_ = std::move(radius);
    s.horizon_ = horizon;
    return s;
}

Value RadiusSchedule::operator[](std::size_t k) const {
    if (k < radii_.size()) return radii_[k];
    return generator_ ? generator_(k) : Value{0};
}

std::size_t RadiusSchedule::first_zero_index() const {
    if (generator_) throw std::logic_error("generated schedules have no zero radius");
    return radii_.size();
}

bool check_sdz(std::span<const Value> a) {
    if (a.empty()) throw std::invalid_argument("check_sdz on an empty set");
    for (Value v : a)
        if (!std::isfinite(v)) return false;
    return *std::min_element(a.begin(), a.end()) == 0;
}

Value g_round(Value x) {
    if (std::isnan(x) || x < 0) throw std::invalid_argument("g_round of a negative value");
    if (x == 0) return 0;
    if (x >= 1) return 1;
    int exponent = 0;
    std::frexp(x, &exponent);  // x = m * 2^exponent, m in [0.5, 1)
    return std::ldexp(1.0, exponent - 1);
}

DistanceMatrix coerce_sdz(const DistanceMatrix& m) {
    const auto report = validate(m);
    if (!report.is_ultrametric) throw NotUltrametricError("coerce_sdz requires an ultrametric input");
    return m.transformed(g_round);
}

RadiusSchedule radius_schedule(const DistanceMatrix& m) {
    if (!check_sdz(m.values())) throw NotSdzError("distance image is not sequentially descending to zero");
    std::vector<Value> radii;
    for (auto it = m.values().rbegin(); it != m.values().rend(); ++it)
        if (*it > 0) radii.push_back(*it);
    return RadiusSchedule::finite(std::move(radii));
}

Value open_equals_closed(const DistanceMatrix& m, PointIndex x, Value r) {
    if (!(r > 0)) throw std::invalid_argument("open_equals_closed requires r > 0");
    const auto& values = m.values();
    auto it = std::lower_bound(values.begin(), values.end(), r);  // first value >= r
    const Value r_star = *std::prev(it);                          // values[0] == 0 < r
    if (open_ball(m, x, r).members != closed_ball(m, x, r_star).members)
        throw std::logic_error("open ball does not coincide with closed ball of radius r*");
    return r_star;
}

Value closed_equals_open(const DistanceMatrix& m, PointIndex x, Value r) {
    if (!(r >= 0)) throw std::invalid_argument("closed_equals_open requires r >= 0");
    const auto& values = m.values();
    auto it = std::upper_bound(values.begin(), values.end(), r);  // first value > r
    Value rho;
    if (it != values.end()) rho = r + (*it - r) / 2;
    else rho = r > 0 ? 2 * r : Value{1};
    if (closed_ball(m, x, r).members != open_ball(m, x, rho).members)
        throw std::logic_error("closed ball does not coincide with open ball of radius rho");
    return rho;
}

std::size_t order_type(std::span<const Value> a) {
    std::set<Value> distinct(a.begin(), a.end());
    return distinct.size();
}

}  // namespace ultratree
