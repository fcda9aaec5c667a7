#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "softfix/metric.hpp"
#include "softfix/soft_set.hpp"

namespace softfix {

/// Soft ball descriptor. Open membership is strict in every component
/// (Def 2.9(iii) order); closed membership is componentwise <=.
struct Ball {
    SoftPoint center;
    SoftReal radius;
    bool closed = false;
};

inline Ball open_ball(SoftPoint center, SoftReal radius) {
    if (!radius.nonnegative()) throw std::domain_error("ball: radius must be nonnegative");
    return Ball{std::move(center), std::move(radius), false};
}

inline Ball closed_ball(SoftPoint center, SoftReal radius) {
    if (!radius.nonnegative()) throw std::domain_error("ball: radius must be nonnegative");
    return Ball{std::move(center), std::move(radius), true};
}

inline bool ball_contains(const SoftMetricSpace& space, const Ball& ball, const SoftPoint& p) {
    SoftReal d = space.distance(ball.center, p);
    OrderVerdict v = compare(d, ball.radius);
    return ball.closed ? v.le : v.lt;
}

/// Materialize the member points of a ball as a soft set (finite backend).
inline SoftSet ball_members(const SoftMetricSpace& space, const Ball& ball) {
    SoftSet out(space.params(), space.universe());
    for (const auto& p : space.soft_points())
        if (ball_contains(space, ball, p)) out.add(as_finite(p));
    return out;
}

/// Componentwise infimum of d(p, q) over the soft points q of S. The minima
/// of different components may be attained at different points of S.
inline SoftReal distance_to_set(const SoftMetricSpace& space, const SoftPoint& p,
                                const SoftSet& S) {
    if (S.is_null()) throw std::domain_error("distance_to_set: set is null");
    std::vector<double> best(space.params()->size(), std::numeric_limits<double>::infinity());
    for (const auto& q : decompose(S)) {
        SoftReal d = space.distance(p, SoftPoint(q));
        for (std::size_t c = 0; c < best.size(); ++c) best[c] = std::min(best[c], d[c]);
    }
    return SoftReal(space.params(), std::move(best));
}

enum class BallSide { member, complement };

namespace detail {

// Exact distance machinery for open balls in analytic sum-family spaces.
// With query (x, a), center (c, b), effective radius r and slack
// s(mu) = r - w * rho_E(b, mu), the distance is
//     inf over mu of [ w * rho_E(a, mu) + inner(mu) ]
// where inner is the infimum of rho_X(x, y) over the mu-slice of the target.
// Everything is piecewise linear in mu, so the infimum is attained (or
// approached) at a finite candidate list: the two labels, the solutions of
// w * rho_E(b, mu) = t for the critical slack levels t, the cap kinks, and
// far plateau representatives.
struct BallDistProblem {
    const SumFamily* fam;
    double a;      // query label value
    double b;      // center label value
    double r;      // effective (min-component) radius
    double point_gap; // rho_X(x, c)
    bool query_at_center; // x == c exactly (discrete point part cases)
};

inline double rho_param(const SumFamily& f, double u, double v) {
    return param_part_distance(f, u, v);
}

// mu in closure{ s(mu) > level }?
inline bool in_closure_above(const BallDistProblem& pr, double mu, double level, double tol) {
    double t = pr.r - level; // need w * rho_E(b, mu) < t, closure <=
    if (t <= 0.0) return false;
    const auto& f = *pr.fam;
    if (f.param_part == ParamPart::capped_abs_diff && f.weight * f.cap < t) return true;
    return f.weight * std::abs(pr.b - mu) <= t + tol;
}

inline std::vector<double> candidate_labels(const BallDistProblem& pr, bool discrete_point) {
    const auto& f = *pr.fam;
    std::vector<double> cands = {pr.a, pr.b};
    std::vector<double> levels = {pr.r, pr.r - pr.point_gap};
    if (discrete_point) levels.push_back(pr.r - 1.0);
    for (double t : levels) {
        if (t < 0.0) continue;
        double span = t / f.weight;
        if (f.param_part == ParamPart::capped_abs_diff && span > f.cap) continue;
        cands.push_back(pr.b - span);
        cands.push_back(pr.b + span);
    }
    if (f.param_part == ParamPart::capped_abs_diff) {
        for (double base : {pr.a, pr.b}) {
            cands.push_back(base - f.cap);
            cands.push_back(base + f.cap);
        }
    }
    double reach = std::abs(pr.a - pr.b) + (pr.r + pr.point_gap + 2.0) / f.weight + 1.0;
    if (f.param_part == ParamPart::capped_abs_diff) reach += 2.0 * f.cap;
    cands.push_back(pr.b - reach);
    cands.push_back(pr.b + reach);
    return cands;
}

inline double ball_distance_scalar(const BallDistProblem& pr, PointPart point_kind, BallSide side) {
    const auto& f = *pr.fam;
    const double tol = 1e-12 * (1.0 + std::abs(pr.r) + std::abs(pr.point_gap));
    const bool discrete = point_kind == PointPart::discrete;

    if (side == BallSide::member && !(pr.r > 0.0))
        throw std::domain_error("distance_to_ball: the ball is empty");
    if (side == BallSide::complement && discrete &&
        f.param_part == ParamPart::capped_abs_diff && pr.r - f.weight * f.cap > 1.0)
        throw std::domain_error("distance_to_ball: the ball complement is empty");

    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](double value) { best = std::min(best, value); };

    for (double mu : candidate_labels(pr, discrete)) {
        double travel = f.weight * rho_param(f, pr.a, mu);
        double s = pr.r - f.weight * rho_param(f, pr.b, mu);
        if (side == BallSide::member) {
            if (!discrete) {
                // slice: open rho_X-ball of radius s around c
                if (in_closure_above(pr, mu, 0.0, tol))
                    consider(travel + std::max(0.0, pr.point_gap - s));
            } else {
                // s > 1: every element; 0 < s <= 1: exactly {c}
                if (in_closure_above(pr, mu, 1.0, tol)) consider(travel);
                if ((s > 0.0 && s <= 1.0 + tol) || in_closure_above(pr, mu, 0.0, tol))
                    consider(travel + pr.point_gap);
            }
        } else {
            if (!discrete) {
                consider(travel + std::max(0.0, s - pr.point_gap));
            } else {
                if (s <= tol) consider(travel);
                if (s <= 1.0 + tol) consider(travel + (pr.query_at_center ? 1.0 : 0.0));
            }
        }
    }
    if (!std::isfinite(best))
        throw std::domain_error("distance_to_ball: target set is empty");
    return best;
}

} // namespace detail

/// Distance from a soft point to an open ball, or to the ball's complement,
/// in an analytic sum-family space. The infimum runs over the whole label
/// line, so it is exact for points whose labels lie outside the declared
/// seed set as well.
inline SoftReal distance_to_ball(const SoftMetricSpace& space, const SoftPoint& p,
                                 const Ball& ball, BallSide side = BallSide::member) {
    if (!space.is_analytic())
        throw std::domain_error("distance_to_ball: requires the analytic backend");
    const auto* fam = std::get_if<SumFamily>(&space.descriptor());
    if (!fam)
        throw std::domain_error("distance_to_ball: closed form exists for the sum family only");
    if (ball.closed)
        throw std::domain_error("distance_to_ball: only open balls are supported");
    const auto& q = as_analytic(p);
    const auto& c = as_analytic(ball.center);

    detail::BallDistProblem pr;
    pr.fam = fam;
    pr.a = q.label;
    pr.b = c.label;
    pr.r = ball.radius.inf();
    pr.point_gap = point_part_distance(fam->point_part, q.coords, c.coords);
    pr.query_at_center = q.coords == c.coords;
    double d = detail::ball_distance_scalar(pr, fam->point_part, side);
    return SoftReal::constant(space.params(), d);
}

} // namespace softfix
