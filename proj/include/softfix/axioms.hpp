#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "softfix/metric.hpp"
#include "softfix/rng.hpp"

namespace softfix {

/// Comparison margin for axiom checks: a violation must exceed this to be
/// reported, and an analytic distance within it of zero counts as zero.
inline constexpr double kAxiomMargin = 1e-9;

struct AxiomWitness {
    std::vector<SoftPoint> points; // pair for M1-M3, triple for M4
    std::size_t component = 0;
    double magnitude = 0.0;
    std::string detail;
};

struct AxiomViolation {
    int axiom = 0; // 1..4
    AxiomWitness witness; // first offender in deterministic evaluation order
    std::size_t count = 0;
};

/// Sampling plan for analytic spaces; ignored by the exhaustive tabulated path.
struct SamplePlan {
    std::size_t pair_samples = 2000;
    std::size_t triple_samples = 2000;
    std::uint64_t seed = 42;
    double box_lo = -10.0;
    double box_hi = 10.0;
    /// Extra deterministic same-element cross-label probes: for each value v
    /// the element with every coordinate equal to v is paired with itself at
    /// every pair of distinct label values. These hunt failures of identity
    /// of indiscernibles and run before any random sample.
    std::vector<double> probe_elements;
};

struct AxiomReport {
    bool exhaustive = false;
    std::size_t pairs_checked = 0;
    std::size_t triples_checked = 0;
    std::uint64_t seed = 0;
    std::vector<AxiomViolation> violations;

    bool verified() const { return violations.empty(); }

    const AxiomViolation* violation_of(int axiom) const {
        for (const auto& v : violations)
            if (v.axiom == axiom) return &v;
        return nullptr;
    }

    std::string summary() const {
        std::ostringstream os;
        if (violations.empty()) {
            if (exhaustive)
                os << "verified (exhaustive over " << pairs_checked << " pairs, "
                   << triples_checked << " triples)";
            else
                os << "not falsified at " << pairs_checked << " pairs, " << triples_checked
                   << " triples (seed " << seed << ")";
        } else {
            os << violations.size() << " axiom(s) violated:";
            for (const auto& v : violations)
                os << " M" << v.axiom << " (" << v.count << " witness(es))";
        }
        return os.str();
    }
};

namespace detail {

class ViolationCollector {
public:
    void record(int axiom, AxiomWitness w) {
        for (auto& v : violations) {
            if (v.axiom == axiom) {
                ++v.count;
                return;
            }
        }
        violations.push_back(AxiomViolation{axiom, std::move(w), 1});
    }

    std::vector<AxiomViolation> violations;
};

inline void check_pair_axioms(const SoftMetricSpace& space, const SoftPoint& p, const SoftPoint& q,
                              ViolationCollector& out) {
    SoftReal dpq = space.distance(p, q);
    SoftReal dqp = space.distance(q, p);
    bool equal_points = p == q;
    for (std::size_t c = 0; c < dpq.size(); ++c) {
        if (dpq[c] < -kAxiomMargin) {
            out.record(1, AxiomWitness{{p, q}, c, -dpq[c], "negative distance component"});
            break;
        }
    }
    if (equal_points) {
        if (dpq.sup() > kAxiomMargin) {
            std::size_t c = 0;
            for (std::size_t i = 0; i < dpq.size(); ++i)
                if (dpq[i] > dpq[c]) c = i;
            out.record(2, AxiomWitness{{p, q}, c, dpq[c], "nonzero self-distance"});
        }
    } else {
        bool zero = true;
        for (std::size_t c = 0; c < dpq.size(); ++c)
            if (std::abs(dpq[c]) > kAxiomMargin) zero = false;
        if (zero)
            out.record(2, AxiomWitness{{p, q}, 0, dpq.sup(),
                                       "zero distance between distinct soft points"});
    }
    for (std::size_t c = 0; c < dpq.size(); ++c) {
        double gap = std::abs(dpq[c] - dqp[c]);
        if (gap > kAxiomMargin) {
            out.record(3, AxiomWitness{{p, q}, c, gap, "asymmetric distance"});
            break;
        }
    }
}

inline void check_triangle(const SoftMetricSpace& space, const SoftPoint& p, const SoftPoint& q,
                           const SoftPoint& r, ViolationCollector& out) {
    SoftReal lhs = space.distance(p, r);
    SoftReal via = space.distance(p, q) + space.distance(q, r);
    for (std::size_t c = 0; c < lhs.size(); ++c) {
        double excess = lhs[c] - via[c];
        if (excess > kAxiomMargin) {
            out.record(4, AxiomWitness{{p, q, r}, c, excess, "triangle inequality fails"});
            return;
        }
    }
}

inline AnalyticPoint random_point(Rng& rng, std::size_t dim, const SamplePlan& plan,
                                  const std::vector<double>& label_pool) {
    std::vector<double> coords(dim);
    for (auto& c : coords) c = rng.uniform(plan.box_lo, plan.box_hi);
    return AnalyticPoint(std::move(coords), label_pool[rng.index(label_pool.size())]);
}

} // namespace detail

/// Verify M1-M4. Tabulated spaces are checked exhaustively over every pair
/// and ordered triple of soft points; analytic spaces are probed on a
/// deterministic seeded sample. Violations are results, not errors: each
/// violated axiom is reported once, with the first witness in evaluation
/// order and the total count.
inline AxiomReport check_axioms(const SoftMetricSpace& space, const SamplePlan& plan = {}) {
    AxiomReport report;
    detail::ViolationCollector collector;

    if (space.is_tabulated()) {
        report.exhaustive = true;
        auto points = space.soft_points();
        const std::size_t n = points.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                detail::check_pair_axioms(space, points[i], points[j], collector);
                ++report.pairs_checked;
            }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    detail::check_triangle(space, points[i], points[j], points[k], collector);
                    ++report.triples_checked;
                }
        report.violations = std::move(collector.violations);
        return report;
    }

    report.seed = plan.seed;
    const auto& values = space.params()->values();
    Rng rng(plan.seed);

    // Structured probes: fixed elements first, then a few seeded ones.
    std::vector<AnalyticPoint> probe_points;
    for (double v : plan.probe_elements)
        probe_points.emplace_back(std::vector<double>(space.dim(), v), values.front());
    for (std::size_t k = 0; k < 4; ++k)
        probe_points.push_back(detail::random_point(rng, space.dim(), plan, values));
    for (const auto& base : probe_points) {
        for (std::size_t i = 0; i < values.size(); ++i)
            for (std::size_t j = i + 1; j < values.size(); ++j) {
                if (values[i] == values[j]) continue;
                AnalyticPoint a(base.coords, values[i]);
                AnalyticPoint b(base.coords, values[j]);
                detail::check_pair_axioms(space, a, b, collector);
                ++report.pairs_checked;
            }
        detail::check_pair_axioms(space, base, base, collector);
        ++report.pairs_checked;
    }

    while (report.pairs_checked < plan.pair_samples) {
        SoftPoint p = detail::random_point(rng, space.dim(), plan, values);
        SoftPoint q = detail::random_point(rng, space.dim(), plan, values);
        detail::check_pair_axioms(space, p, q, collector);
        ++report.pairs_checked;
    }
    for (std::size_t t = 0; t < plan.triple_samples; ++t) {
        SoftPoint p = detail::random_point(rng, space.dim(), plan, values);
        SoftPoint q = detail::random_point(rng, space.dim(), plan, values);
        SoftPoint r = detail::random_point(rng, space.dim(), plan, values);
        detail::check_triangle(space, p, q, r, collector);
        ++report.triples_checked;
    }

    report.violations = std::move(collector.violations);
    return report;
}

/// Turn an arbitrary nonnegative square table into a genuine soft metric:
/// zero the diagonal, symmetrize by componentwise min, close each component
/// under min-plus (Floyd-Warshall over the complete soft-point graph), then
/// bump any off-diagonal zero component to (smallest positive entry) * 1e-3
/// and re-close once. The output passes M1-M4 exhaustively and every
/// off-diagonal component is strictly positive. Idempotent on its own output.
inline SoftMetricSpace repair_to_metric(const RawDistanceTable& raw, ParamSetPtr params,
                                        UniversePtr universe) {
    const std::size_t n = raw.size();
    const std::size_t nc = params->size();
    if (n != params->size() * universe->size())
        throw std::invalid_argument("repair: table must cover all soft points");
    for (const auto& row : raw) {
        if (row.size() != n) throw std::invalid_argument("repair: table must be square");
        for (const auto& d : row) {
            if (!same_params(d.params(), params))
                throw std::invalid_argument("repair: entry over a different parameter set");
            if (!d.nonnegative())
                throw std::domain_error("repair: input entries must be nonnegative");
        }
    }

    // comp[c][i][j]
    std::vector<std::vector<std::vector<double>>> comp(
        nc, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
    for (std::size_t c = 0; c < nc; ++c)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                comp[c][i][j] = raw[i][j][c];

    auto zero_diagonal = [&] {
        for (std::size_t c = 0; c < nc; ++c)
            for (std::size_t i = 0; i < n; ++i) comp[c][i][i] = 0.0;
    };
    auto symmetrize = [&] {
        for (std::size_t c = 0; c < nc; ++c)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    comp[c][i][j] = comp[c][j][i] = std::min(comp[c][i][j], comp[c][j][i]);
    };
    // Min-plus closure, iterated to a floating-point fixed point: a single
    // Floyd-Warshall sweep can leave ulp-level slack because later stages
    // lower intermediate distances, and bit-exact idempotence needs the
    // genuine fixed point. Entries only decrease, so this terminates.
    auto close = [&] {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t c = 0; c < nc; ++c)
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t i = 0; i < n; ++i)
                        for (std::size_t j = 0; j < n; ++j) {
                            double via = comp[c][i][k] + comp[c][k][j];
                            if (via < comp[c][i][j]) {
                                comp[c][i][j] = via;
                                changed = true;
                            }
                        }
        }
    };

    zero_diagonal();
    symmetrize();
    close();

    bool bumped = false;
    if (n > 1) {
        double smallest_positive = 0.0;
        for (std::size_t c = 0; c < nc; ++c)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (i != j && comp[c][i][j] > 0.0 &&
                        (smallest_positive == 0.0 || comp[c][i][j] < smallest_positive))
                        smallest_positive = comp[c][i][j];
        bool has_zero = false;
        for (std::size_t c = 0; c < nc && !has_zero; ++c)
            for (std::size_t i = 0; i < n && !has_zero; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (comp[c][i][j] == 0.0) { has_zero = true; break; }
        if (has_zero) {
            if (smallest_positive == 0.0)
                throw std::domain_error("repair: table has no positive entry to scale the bump from");
            double bump = smallest_positive * 1e-3;
            for (std::size_t c = 0; c < nc; ++c)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = i + 1; j < n; ++j)
                        if (comp[c][i][j] == 0.0) comp[c][i][j] = comp[c][j][i] = bump;
            bumped = true;
        }
    }
    if (bumped) close();

    std::vector<std::vector<SoftReal>> table;
    table.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<SoftReal> row;
        row.reserve(n);
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<double> e(nc);
            for (std::size_t c = 0; c < nc; ++c) e[c] = comp[c][i][j];
            row.emplace_back(params, std::move(e));
        }
        table.push_back(std::move(row));
    }
    return SoftMetricSpace::tabulated(std::move(params), std::move(universe), std::move(table));
}

} // namespace softfix
