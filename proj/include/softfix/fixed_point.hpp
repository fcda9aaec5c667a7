#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "softfix/mapping.hpp"
#include "softfix/metric.hpp"
#include "softfix/rng.hpp"
#include "softfix/soft_real.hpp"

namespace softfix {

enum class ContractionKind { banach, kannan, chatterjea };

inline const char* kind_name(ContractionKind k) {
    switch (k) {
    case ContractionKind::banach: return "banach";
    case ContractionKind::kannan: return "kannan";
    case ContractionKind::chatterjea: return "chatterjea";
    }
    return "?";
}

/// Feasibility threshold for the contraction constant: 1 for the plain
/// contraction condition, 1/2 for the self-displacement and cross-distance
/// conditions.
inline double kind_threshold(ContractionKind k) {
    return k == ContractionKind::banach ? 1.0 : 0.5;
}

inline constexpr double kFeasibilityMargin = 1e-9;

/// All unordered pairs of distinct soft points (tabulated backend).
struct ExhaustivePairs {};

/// Pairs (x_i, x_j), i < j, from a uniform grid on [lo, hi] at one fixed
/// label value (analytic backend, dimension 1).
struct GridPairs {
    double lo = -10.0;
    double hi = 10.0;
    std::size_t per_axis = 200;
    double label_value = 0.0;
};

/// Seeded random pairs: coordinates uniform in the box, label values drawn
/// from the declared seed labels.
struct RandomPairs {
    std::size_t count = 1000;
    std::uint64_t seed = 42;
    double lo = -10.0;
    double hi = 10.0;
};

struct ExplicitPairs {
    std::vector<std::pair<SoftPoint, SoftPoint>> pairs;
};

using PairPlan = std::variant<ExhaustivePairs, GridPairs, RandomPairs, ExplicitPairs>;

inline std::vector<std::pair<SoftPoint, SoftPoint>> generate_pairs(const SoftMetricSpace& space,
                                                                   const PairPlan& plan) {
    std::vector<std::pair<SoftPoint, SoftPoint>> out;
    if (std::holds_alternative<ExhaustivePairs>(plan)) {
        if (!space.is_tabulated())
            throw std::domain_error("pair plan: exhaustive enumeration requires a tabulated space");
        auto pts = space.soft_points();
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) out.emplace_back(pts[i], pts[j]);
        return out;
    }
    if (const auto* grid = std::get_if<GridPairs>(&plan)) {
        if (!space.is_analytic() || space.dim() != 1)
            throw std::domain_error("pair plan: grid pairs require a one-dimensional analytic space");
        if (grid->per_axis < 2) throw std::invalid_argument("pair plan: grid needs >= 2 nodes");
        std::vector<double> xs(grid->per_axis);
        for (std::size_t i = 0; i < grid->per_axis; ++i)
            xs[i] = grid->lo + (grid->hi - grid->lo) * static_cast<double>(i) /
                                   static_cast<double>(grid->per_axis - 1);
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = i + 1; j < xs.size(); ++j)
                out.emplace_back(AnalyticPoint({xs[i]}, grid->label_value),
                                 AnalyticPoint({xs[j]}, grid->label_value));
        return out;
    }
    if (const auto* rnd = std::get_if<RandomPairs>(&plan)) {
        if (!space.is_analytic())
            throw std::domain_error("pair plan: random pairs require an analytic space");
        Rng rng(rnd->seed);
        const auto& labels = space.params()->values();
        auto sample = [&] {
            std::vector<double> c(space.dim());
            for (auto& v : c) v = rng.uniform(rnd->lo, rnd->hi);
            return AnalyticPoint(std::move(c), labels[rng.index(labels.size())]);
        };
        for (std::size_t k = 0; k < rnd->count; ++k) out.emplace_back(sample(), sample());
        return out;
    }
    return std::get<ExplicitPairs>(plan).pairs;
}

/// Exhaustive on tabulated spaces, sampled otherwise.
inline PairPlan default_pair_plan(const SoftMetricSpace& space, std::size_t samples = 1000,
                                  std::uint64_t seed = 42) {
    if (space.is_tabulated()) return ExhaustivePairs{};
    RandomPairs p;
    p.count = samples;
    p.seed = seed;
    return p;
}

struct ContractionReport {
    ContractionKind kind = ContractionKind::banach;
    SoftReal alpha_hat;       // componentwise supremum of the condition ratio
    bool feasible = false;    // alpha_hat < threshold pointwise, no degenerate pair
    std::optional<std::pair<SoftPoint, SoftPoint>> witness; // maximizer of the sup-component ratio
    double witness_ratio = 0.0;
    bool degenerate_denominator = false; // zero denominator with positive numerator seen
    std::size_t pairs_evaluated = 0;
    bool exhaustive = false;

    ContractionReport() : alpha_hat(make_params({"_"}), {0.0}) {}
    explicit ContractionReport(ParamSetPtr params) : alpha_hat(SoftReal::zeros(std::move(params))) {}

    double threshold() const { return kind_threshold(kind); }
};

/// Estimate the contraction constant of (f, phi) for the given condition
/// class as the componentwise supremum of numerator/denominator ratios over
/// the planned pairs. A zero denominator component with zero numerator
/// contributes nothing; with a positive numerator it forces infeasibility.
/// Sampled estimates are lower bounds of the true supremum, so a feasible
/// verdict from a non-exhaustive plan means "not falsified".
inline ContractionReport estimate_coefficient(const SoftMetricSpace& space, const SoftMapping& m,
                                              ContractionKind kind, const PairPlan& plan) {
    auto pairs = generate_pairs(space, plan);
    if (pairs.empty()) throw std::domain_error("estimate_coefficient: empty pair plan");

    ContractionReport report(space.params());
    report.kind = kind;
    report.exhaustive = space.is_tabulated() && std::holds_alternative<ExhaustivePairs>(plan);

    const std::size_t nc = space.params()->size();
    std::vector<double> alpha(nc, 0.0);

    for (const auto& [p, q] : pairs) {
        SoftPoint tp = apply_point(m, p);
        SoftPoint tq = apply_point(m, q);
        SoftReal num = space.distance(tp, tq);
        SoftReal den = [&] {
            switch (kind) {
            case ContractionKind::banach: return space.distance(p, q);
            case ContractionKind::kannan: return space.distance(tp, p) + space.distance(tq, q);
            case ContractionKind::chatterjea: return space.distance(tp, q) + space.distance(tq, p);
            }
            throw std::logic_error("unreachable");
        }();
        double pair_max = -1.0;
        for (std::size_t c = 0; c < nc; ++c) {
            if (den[c] == 0.0) {
                if (num[c] > kFeasibilityMargin && !report.degenerate_denominator) {
                    report.degenerate_denominator = true;
                    report.witness = {p, q};
                    report.witness_ratio = std::numeric_limits<double>::infinity();
                }
                continue;
            }
            double ratio = num[c] / den[c];
            alpha[c] = std::max(alpha[c], ratio);
            pair_max = std::max(pair_max, ratio);
        }
        if (!report.degenerate_denominator && pair_max > report.witness_ratio) {
            report.witness_ratio = pair_max;
            report.witness = {p, q};
        }
        ++report.pairs_evaluated;
    }

    report.alpha_hat = SoftReal(space.params(), std::move(alpha));
    report.feasible = !report.degenerate_denominator;
    for (std::size_t c = 0; c < nc; ++c)
        if (!(report.alpha_hat[c] < report.threshold() - kFeasibilityMargin))
            report.feasible = false;
    return report;
}

/// Per-step geometric rate certified by the report: alpha_hat itself for the
/// plain contraction, h = alpha_hat / (1 - alpha_hat) for the other classes.
inline SoftReal certified_rate(const ContractionReport& report) {
    if (report.kind == ContractionKind::banach) return report.alpha_hat;
    SoftReal one = SoftReal::ones(report.alpha_hat.params());
    for (std::size_t c = 0; c < report.alpha_hat.size(); ++c)
        if (report.alpha_hat[c] >= 0.5)
            throw std::domain_error("certified_rate: h = a/(1-a) needs every component below 1/2");
    return divide(report.alpha_hat, one - report.alpha_hat);
}

struct IterationTrace {
    std::vector<SoftPoint> iterates;       // x0, x1, ...
    std::vector<SoftReal> step_dists;      // d(x^{n+1}, x^n)
    std::vector<SoftReal> apriori_bounds;  // rate^n/(1-rate) * d(x1,x0), per iterate
    SoftReal rate;
    bool converged = false;
    std::optional<SoftPoint> fixed_point;
    std::optional<SoftReal> residual;      // d((f,phi)(x*), x*)

    IterationTrace() : rate(make_params({"_"}), {0.0}) {}
    explicit IterationTrace(SoftReal r) : rate(std::move(r)) {}
};

/// Certified Picard iteration. Stops as soon as the a priori tail bound
/// rate^n/(1-rate) * d(x1,x0) falls below tol in every component (that bound
/// dominates d(x^n, x*), so the returned point is within tol of the fixed
/// point), or immediately when a step distance vanishes. Each observed step
/// ratio is checked against the certified rate; exceeding it aborts, since
/// the sampled coefficient was then an underestimate along the orbit.
inline IterationTrace picard_solve(const SoftMetricSpace& space, const SoftMapping& m,
                                   ContractionKind kind, const SoftPoint& x0, double tol,
                                   std::size_t max_iter, const ContractionReport& report) {
    if (report.kind != kind)
        throw std::invalid_argument("picard_solve: report was estimated for a different condition");
    if (!report.feasible)
        throw std::domain_error("picard_solve: requires a feasible contraction report");
    if (!(tol > 0.0)) throw std::invalid_argument("picard_solve: tolerance must be positive");

    IterationTrace trace(certified_rate(report));
    for (std::size_t c = 0; c < trace.rate.size(); ++c)
        if (trace.rate[c] >= 1.0)
            throw std::domain_error("picard_solve: certified rate has a component >= 1");

    trace.iterates.push_back(x0);
    SoftPoint x1 = apply_point(m, x0);
    SoftReal step0 = space.distance(x1, x0);
    trace.apriori_bounds.push_back(geometric_tail_bound(trace.rate, 0, step0));

    if (step0.is_zero()) {
        trace.step_dists.push_back(step0);
        trace.converged = true;
        trace.fixed_point = x0;
        trace.residual = step0;
        return trace;
    }

    SoftPoint current = x0;
    for (std::size_t n = 1; n <= max_iter; ++n) {
        SoftPoint next = apply_point(m, current);
        SoftReal step = space.distance(next, current);
        if (n >= 2) {
            const SoftReal& prev = trace.step_dists.back();
            for (std::size_t c = 0; c < step.size(); ++c)
                if (step[c] > trace.rate[c] * prev[c] + kFeasibilityMargin)
                    throw std::runtime_error(
                        "picard_solve: observed step ratio exceeds the certified rate at component '" +
                        space.params()->label(c) + "' (sampled coefficient was an underestimate)");
        }
        trace.step_dists.push_back(step);
        trace.iterates.push_back(next);
        trace.apriori_bounds.push_back(geometric_tail_bound(trace.rate, n, step0));
        current = next;

        if (step.is_zero() || trace.apriori_bounds.back().sup() < tol) {
            trace.converged = true;
            trace.fixed_point = current;
            trace.residual = space.distance(apply_point(m, current), current);
            return trace;
        }
    }
    return trace;
}

/// Independent oracle for the uniqueness claims: scan every soft point of a
/// tabulated space for exact fixedness under (f, phi).
inline std::vector<SoftPoint> brute_force_fixed_points(const SoftMetricSpace& space,
                                                       const SoftMapping& m) {
    if (!space.is_tabulated())
        throw std::domain_error("brute_force_fixed_points: requires the tabulated backend");
    std::vector<SoftPoint> out;
    for (const auto& p : space.soft_points())
        if (apply_point(m, p) == p) out.push_back(p);
    return out;
}

struct LabelFactor {
    std::size_t label = 0;
    std::optional<double> factor; // absent: no finite factor (zero denominator, positive numerator)
    std::string note;
};

struct ProjectionPlan {
    std::size_t samples = 1000;
    std::uint64_t seed = 42;
    double lo = -10.0;
    double hi = 10.0;
};

/// Per-label contraction factors of the projected maps: for each label l the
/// supremum over x != y of d_{phi(l)}(f x, f y) / d_l(x, y). Exhaustive over
/// element pairs on the tabulated backend, sampled on the analytic one.
inline std::vector<LabelFactor> projected_factors(const SoftMetricSpace& space,
                                                  const SoftMapping& m,
                                                  const ProjectionPlan& plan = {}) {
    std::vector<LabelFactor> out;
    const std::size_t nl = space.params()->size();

    if (space.is_tabulated()) {
        const auto* f = std::get_if<TablePointMap>(&m.point_map);
        const auto* phi = std::get_if<TableParamMap>(&m.param_map);
        if (!f || !phi)
            throw std::domain_error("projected_factors: tabulated spaces require table maps");
        for (std::size_t l = 0; l < nl; ++l) {
            auto dl = space.project_table(l);
            auto dphil = space.project_table(phi->image.at(l));
            LabelFactor lf{l, 0.0, ""};
            for (std::size_t x = 0; x < dl.size() && lf.factor; ++x)
                for (std::size_t y = x + 1; y < dl.size(); ++y) {
                    double num = dphil[f->image.at(x)][f->image.at(y)];
                    double den = dl[x][y];
                    if (den == 0.0) {
                        if (num == 0.0) continue;
                        lf.factor.reset();
                        lf.note = "zero denominator with positive numerator";
                        break;
                    }
                    lf.factor = std::max(*lf.factor, num / den);
                }
            out.push_back(std::move(lf));
        }
        return out;
    }

    const auto* f = std::get_if<AffinePointMap>(&m.point_map);
    if (!f) throw std::domain_error("projected_factors: analytic spaces require an affine point map");
    for (std::size_t l = 0; l < nl; ++l) {
        double v = space.params()->value(l);
        double phi_v = as_analytic(apply_point(m, AnalyticPoint(std::vector<double>(space.dim(), 0.0), v))).label;
        Rng rng(plan.seed + l);
        LabelFactor lf{l, 0.0, ""};
        for (std::size_t k = 0; k < plan.samples && lf.factor; ++k) {
            std::vector<double> x(space.dim()), y(space.dim());
            for (auto& c : x) c = rng.uniform(plan.lo, plan.hi);
            for (auto& c : y) c = rng.uniform(plan.lo, plan.hi);
            double den = space.project_distance(v, x, y);
            double num = space.project_distance(phi_v, (*f)(x), (*f)(y));
            if (den == 0.0) {
                if (num == 0.0) continue;
                lf.factor.reset();
                lf.note = "zero denominator with positive numerator";
                break;
            }
            lf.factor = std::max(*lf.factor, num / den);
        }
        out.push_back(std::move(lf));
    }
    return out;
}

/// Forward direction of the projection property: a feasible plain-contraction
/// report forces every projected factor below 1. (The converse fails and is
/// not asserted.)
inline bool projection_forward_holds(const ContractionReport& report,
                                     const std::vector<LabelFactor>& factors) {
    if (!report.feasible || report.kind != ContractionKind::banach) return true;
    for (const auto& lf : factors)
        if (!lf.factor || !(*lf.factor < 1.0)) return false;
    return true;
}

} // namespace softfix
