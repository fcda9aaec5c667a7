#pragma once

#include <optional>
#include <stdexcept>
#include <utility>

#include "softfix/balls.hpp"
#include "softfix/metric.hpp"
#include "softfix/soft_set.hpp"

namespace softfix {

/// Margin for zero/positivity tests of analytic region predicates.
inline constexpr double kRegionMargin = 1e-9;

struct OpennessVerdict {
    bool open = false;
    std::optional<FinitePoint> witness; // a point of S with no interior ball
};

/// A soft set is open iff every one of its points carries an open ball inside
/// it. The candidate radius is half the componentwise distance from the point
/// to the complement's members; the point is interior exactly when that
/// radius is strictly positive in every component.
inline OpennessVerdict is_open(const SoftMetricSpace& space, const SoftSet& S) {
    if (!space.is_tabulated()) throw std::domain_error("is_open: requires the tabulated backend");
    if (S.is_null()) return {true, std::nullopt};
    SoftSet comp = complement_of(S);
    if (comp.is_null()) return {true, std::nullopt};
    for (const auto& p : decompose(S)) {
        SoftReal eps = 0.5 * distance_to_set(space, SoftPoint(p), comp);
        if (!(eps.inf() > 0.0)) return {false, p};
        for (const auto& q : decompose(ball_members(space, open_ball(SoftPoint(p), eps))))
            if (!S.contains(q)) return {false, p};
    }
    return {true, std::nullopt};
}

inline bool is_closed(const SoftMetricSpace& space, const SoftSet& S) {
    return is_open(space, complement_of(S)).open;
}

enum class Region { closure, interior, boundary };

/// Distance characterization of the regions: closure membership is zero
/// distance to the set, interior membership is strictly positive distance
/// to the complement (in every component), boundary is zero distance to both.
inline bool in_region(const SoftMetricSpace& space, const SoftSet& S, const SoftPoint& p,
                      Region region) {
    if (!space.is_tabulated())
        throw std::domain_error("in_region: soft-set form requires the tabulated backend");
    auto zero_dist_to = [&](const SoftSet& T) {
        if (T.is_null()) return false; // distance to the null set is unbounded
        return distance_to_set(space, p, T).is_zero();
    };
    SoftSet comp = complement_of(S);
    switch (region) {
    case Region::closure:
        return zero_dist_to(S);
    case Region::interior:
        if (comp.is_null()) return true;
        return distance_to_set(space, p, comp).inf() > 0.0;
    case Region::boundary:
        return zero_dist_to(S) && zero_dist_to(comp);
    }
    throw std::logic_error("unreachable");
}

/// Analytic variant for open-ball sets, using the closed-form point-to-ball
/// distances. Zero and positivity are read within kRegionMargin.
inline bool in_region(const SoftMetricSpace& space, const Ball& ball, const SoftPoint& p,
                      Region region) {
    auto dist_member = [&] { return distance_to_ball(space, p, ball, BallSide::member).sup(); };
    auto dist_complement = [&] {
        return distance_to_ball(space, p, ball, BallSide::complement).sup();
    };
    switch (region) {
    case Region::closure:
        return dist_member() <= kRegionMargin;
    case Region::interior:
        return dist_complement() > kRegionMargin;
    case Region::boundary:
        return dist_member() <= kRegionMargin && dist_complement() <= kRegionMargin;
    }
    throw std::logic_error("unreachable");
}

/// Materialized closure: all soft points at zero distance from S.
inline SoftSet closure_set(const SoftMetricSpace& space, const SoftSet& S) {
    SoftSet out(space.params(), space.universe());
    if (S.is_null()) return out;
    for (const auto& p : space.soft_points())
        if (distance_to_set(space, p, S).is_zero()) out.add(as_finite(p));
    return out;
}

/// Materialized interior: all soft points strictly away from the complement.
inline SoftSet interior_set(const SoftMetricSpace& space, const SoftSet& S) {
    SoftSet comp = complement_of(S);
    if (comp.is_null()) return S;
    SoftSet out(space.params(), space.universe());
    for (const auto& p : space.soft_points())
        if (distance_to_set(space, p, comp).inf() > 0.0) out.add(as_finite(p));
    return out;
}

/// Raised when a separation radius has a zero component: the space geometry
/// cannot support disjoint ball covers around that point.
class DegenerateGeometryError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Normal-separation construction: around every point of F1 take the open
/// ball of radius one third of its distance to F2, and symmetrically for F2.
/// Guarantees F1 inside U, F2 inside V, U and V disjoint.
inline std::pair<SoftSet, SoftSet> separate_closed_sets(const SoftMetricSpace& space,
                                                        const SoftSet& F1, const SoftSet& F2) {
    if (!space.is_tabulated())
        throw std::domain_error("separate_closed_sets: requires the tabulated backend");
    if (F1.is_null() || F2.is_null())
        throw std::invalid_argument("separate_closed_sets: both sets must be non-null");
    if (!intersect_of(F1, F2).is_null())
        throw std::invalid_argument("separate_closed_sets: sets must be disjoint");

    auto cover = [&](const SoftSet& from, const SoftSet& other) {
        SoftSet out(space.params(), space.universe());
        for (const auto& p : decompose(from)) {
            SoftReal eps = distance_to_set(space, SoftPoint(p), other);
            if (!(eps.inf() > 0.0))
                throw DegenerateGeometryError(
                    "separate_closed_sets: degenerate geometry at point " +
                    point_to_string(SoftPoint(p), space.universe().get(), space.params().get()) +
                    " (distance to the other set has a zero component)");
            out = union_of(out, ball_members(space, open_ball(SoftPoint(p), (1.0 / 3.0) * eps)));
        }
        return out;
    };

    return {cover(F1, F2), cover(F2, F1)};
}

} // namespace softfix
