#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "softfix/mapping.hpp"
#include "softfix/metric.hpp"
#include "softfix/rng.hpp"
#include "softfix/soft_real.hpp"
#include "softfix/topology.hpp"

namespace softfix {

struct DeltaSearchPlan {
    std::size_t levels = 30;        // delta halvings tried per epsilon
    std::size_t samples = 1000;     // delta-ball samples per level
    std::uint64_t seed = 42;
};

struct EpsilonVerdict {
    SoftReal epsilon;
    bool witnessed = false;
    double delta = 0.0;                       // witnessing radius when found
    std::optional<SoftPoint> failing_sample;  // sample breaking the implication at the finest delta
};

struct ContinuityReport {
    bool discrete_trivial = false; // finite backend: continuity is vacuous
    std::vector<EpsilonVerdict> verdicts;

    bool all_witnessed() const {
        if (discrete_trivial) return true;
        for (const auto& v : verdicts)
            if (!v.witnessed) return false;
        return true;
    }
};

namespace detail {

/// Sample a soft point q with d(p, q) < delta, deterministically from rng.
/// The total budget t < delta is split between the parameter part and the
/// point part, so membership in the open ball holds by construction.
inline AnalyticPoint sample_in_ball(const SoftMetricSpace& space, const AnalyticPoint& p,
                                    double delta, Rng& rng) {
    const std::size_t dim = space.dim();
    auto random_direction = [&](double length) {
        std::vector<double> dir(dim);
        double norm = 0.0;
        do {
            norm = 0.0;
            for (auto& d : dir) {
                d = rng.uniform(-1.0, 1.0);
                norm += d * d;
            }
            norm = std::sqrt(norm);
        } while (norm == 0.0);
        std::vector<double> out(dim);
        for (std::size_t i = 0; i < dim; ++i) out[i] = p.coords[i] + dir[i] * (length / norm);
        return out;
    };

    if (const auto* sum = std::get_if<SumFamily>(&space.descriptor())) {
        double t = delta * rng.next_unit();
        double param_budget = t * rng.next_unit();
        double point_budget = t - param_budget;
        double mu = p.label + (rng.coin() ? 1.0 : -1.0) * (param_budget / sum->weight);
        if (sum->point_part == PointPart::discrete) {
            // rho_X is 0/1: move the point only when the budget allows distance 1
            if (point_budget > 1.0 && rng.coin()) {
                std::vector<double> moved = p.coords;
                moved[0] += 1.0 + rng.next_unit();
                return AnalyticPoint(std::move(moved), mu);
            }
            return AnalyticPoint(p.coords, mu);
        }
        return AnalyticPoint(random_direction(point_budget), mu);
    }

    // power family: d = rho_X^(1 + |dl|); choose the label offset first, then
    // the point radius that keeps the value below delta
    double dl = rng.uniform(0.0, 2.0);
    double mu = p.label + (rng.coin() ? 1.0 : -1.0) * dl;
    double target = delta * rng.next_unit();
    double rho = std::pow(target, 1.0 / (1.0 + dl));
    return AnalyticPoint(random_direction(rho), mu);
}

} // namespace detail

/// Epsilon-delta continuity probe at a soft point. For each epsilon a
/// decreasing grid of deltas is tried; a delta is a witness when every seeded
/// sample of its open ball maps into the epsilon ball of the image. Finite
/// spaces are discrete, so the verdict there is "trivially continuous".
inline ContinuityReport check_continuity_at(const SoftMetricSpace& domain,
                                            const SoftMetricSpace& codomain, const SoftMapping& m,
                                            const SoftPoint& p,
                                            const std::vector<SoftReal>& eps_grid,
                                            const DeltaSearchPlan& plan = {}) {
    ContinuityReport report;
    if (domain.is_tabulated()) {
        report.discrete_trivial = true;
        return report;
    }
    const auto& ap = as_analytic(p);
    SoftPoint image = apply_point(m, p);

    for (const auto& eps : eps_grid) {
        if (!(eps.inf() > 0.0)) throw std::invalid_argument("continuity: epsilon must be positive");
        EpsilonVerdict verdict{eps, false, 0.0, std::nullopt};
        Rng rng(plan.seed);
        for (std::size_t level = 0; level < plan.levels; ++level) {
            double delta = eps.inf() * std::pow(0.5, static_cast<double>(level));
            bool ok = true;
            for (std::size_t s = 0; s < plan.samples; ++s) {
                AnalyticPoint q = detail::sample_in_ball(domain, ap, delta, rng);
                SoftReal image_dist = codomain.distance(image, apply_point(m, SoftPoint(q)));
                if (!compare(image_dist, eps).lt) {
                    ok = false;
                    verdict.failing_sample = SoftPoint(q);
                    break;
                }
            }
            if (ok) {
                verdict.witnessed = true;
                verdict.delta = delta;
                break;
            }
        }
        report.verdicts.push_back(std::move(verdict));
    }
    return report;
}

struct SubsetPlan {
    std::size_t exhaustive_cap = 12;   // enumerate all subsets up to 2^cap
    std::size_t random_subsets = 512;  // otherwise, this many seeded subsets
    std::uint64_t seed = 42;
};

struct EquivalenceReport {
    bool preimage_open = true;       // open preimages of open sets
    bool preimage_closed = true;     // closed preimages of closed sets
    bool image_closure = true;       // (f,phi)(cl F) inside cl (f,phi)(F)
    bool closure_preimage = true;    // cl of preimage inside preimage of cl
    bool preimage_interior = true;   // preimage of interior inside interior of preimage
    bool exhaustive = false;
    std::size_t subsets_checked = 0;

    bool all_agree() const {
        return preimage_open == preimage_closed && preimage_closed == image_closure &&
               image_closure == closure_preimage && closure_preimage == preimage_interior;
    }
    bool all_hold() const {
        return preimage_open && preimage_closed && image_closure && closure_preimage &&
               preimage_interior;
    }
};

namespace detail {

inline std::vector<SoftSet> enumerate_subsets(const SoftMetricSpace& space,
                                              const SubsetPlan& plan, std::uint64_t salt) {
    const std::size_t n = space.soft_point_count();
    std::vector<SoftSet> out;
    if (n <= plan.exhaustive_cap) {
        for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
            SoftSet s(space.params(), space.universe());
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1ULL << i)) s.add(space.point_at(i));
            out.push_back(std::move(s));
        }
    } else {
        Rng rng(plan.seed ^ salt);
        for (std::size_t k = 0; k < plan.random_subsets; ++k) {
            SoftSet s(space.params(), space.universe());
            for (std::size_t i = 0; i < n; ++i)
                if (rng.coin()) s.add(space.point_at(i));
            out.push_back(std::move(s));
        }
    }
    return out;
}

} // namespace detail

/// Evaluate the five set-level characterizations of continuity independently
/// over enumerated soft subsets, and report whether they agree.
inline EquivalenceReport check_continuity_equivalences(const SoftMetricSpace& domain,
                                                       const SoftMetricSpace& codomain,
                                                       const SoftMapping& m,
                                                       const SubsetPlan& plan = {}) {
    if (!domain.is_tabulated() || !codomain.is_tabulated())
        throw std::domain_error("continuity equivalences: requires tabulated backends");
    EquivalenceReport report;
    report.exhaustive = domain.soft_point_count() <= plan.exhaustive_cap &&
                        codomain.soft_point_count() <= plan.exhaustive_cap;

    auto cod_subsets = detail::enumerate_subsets(codomain, plan, 0x636f64);
    for (const auto& G : cod_subsets) {
        SoftSet pre = preimage_of(m, G, domain);
        if (is_open(codomain, G).open && !is_open(domain, pre).open) report.preimage_open = false;
        if (is_closed(codomain, G) && !is_closed(domain, pre)) report.preimage_closed = false;
        if (!subset_of(closure_set(domain, pre), preimage_of(m, closure_set(codomain, G), domain)))
            report.closure_preimage = false;
        if (!subset_of(preimage_of(m, interior_set(codomain, G), domain),
                       interior_set(domain, pre)))
            report.preimage_interior = false;
        ++report.subsets_checked;
    }
    for (const auto& F : detail::enumerate_subsets(domain, plan, 0x646f6d)) {
        if (!subset_of(image_of(m, closure_set(domain, F), codomain),
                       closure_set(codomain, image_of(m, F, codomain))))
            report.image_closure = false;
        ++report.subsets_checked;
    }
    return report;
}

struct SequentialProbePlan {
    double tolerance = 1e-6;
    std::size_t max_n = 10000;
};

struct SequentialVerdict {
    bool passed = false;
    std::size_t first_n = 0;          // first index with image distance below tolerance
    double final_image_distance = 0.0;
    double final_point_distance = 0.0;
};

/// Sequential-continuity probe: the generator must yield a sequence converging
/// to p (verified: sup-component distances non-increasing within 1e-9 and
/// below tolerance by max_n, else the probe is inapplicable and throws).
/// Reports the first index whose image lands within tolerance of the image
/// of p.
inline SequentialVerdict sequential_probe(const SoftMetricSpace& domain,
                                          const SoftMetricSpace& codomain, const SoftMapping& m,
                                          const std::function<SoftPoint(std::size_t)>& sequence,
                                          const SoftPoint& p,
                                          const SequentialProbePlan& plan = {}) {
    SoftPoint image = apply_point(m, p);
    SequentialVerdict verdict;
    double prev = -1.0;
    bool found = false;
    double point_dist = 0.0;
    double image_dist = 0.0;
    for (std::size_t n = 1; n <= plan.max_n; ++n) {
        SoftPoint xn = sequence(n);
        point_dist = domain.distance(xn, p).sup();
        if (prev >= 0.0 && point_dist > prev + 1e-9)
            throw std::invalid_argument(
                "sequential_probe: generated sequence is not monotonically approaching the point");
        prev = point_dist;
        image_dist = codomain.distance(apply_point(m, xn), image).sup();
        if (!found && image_dist < plan.tolerance) {
            found = true;
            verdict.first_n = n;
        }
    }
    if (!(point_dist < plan.tolerance))
        throw std::invalid_argument(
            "sequential_probe: generated sequence does not converge to the point within tolerance");
    verdict.final_point_distance = point_dist;
    verdict.final_image_distance = image_dist;
    verdict.passed = found && image_dist < plan.tolerance;
    return verdict;
}

} // namespace softfix
