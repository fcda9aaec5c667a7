#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "softfix/axioms.hpp"
#include "softfix/fixed_point.hpp"
#include "softfix/mapping.hpp"
#include "softfix/metric.hpp"
#include "softfix/rng.hpp"

namespace softfix {

/// Example 4.12 fixture: the plane with d((x,l),(y,m)) = |l-m| + |x-y|_2,
/// under f(x) = x/2, phi(l) = 3l. The projected maps contract with factor
/// 1/2 at every label, yet the soft mapping itself is not a soft contraction:
/// the image distance of the witness pair exceeds the original distance.
struct HalvingTriplingReplay {
    SoftMetricSpace space;
    SoftMapping mapping;
    SoftPoint p1, p2;             // (0,1)@2 and (1,0)@1
    double point_distance = 0.0;  // d(p1, p2) = 1 + sqrt(2)
    double image_distance = 0.0;  // d((f,phi)p1, (f,phi)p2) = 3 + sqrt(2)/2
    bool image_exceeds = false;
    ContractionReport banach;
    std::vector<LabelFactor> factors;
};

inline HalvingTriplingReplay replay_4_12() {
    auto params = make_numeric_params({1.0, 2.0});
    SumFamily fam;
    fam.param_part = ParamPart::abs_diff;
    fam.weight = 1.0;
    fam.point_part = PointPart::euclidean;

    HalvingTriplingReplay r{SoftMetricSpace::analytic(params, 2, fam),
                            SoftMapping{scaling_map(2, 0.5), AffineParamMap{3.0, 0.0}},
                            AnalyticPoint({0.0, 1.0}, 2.0),
                            AnalyticPoint({1.0, 0.0}, 1.0),
                            0.0,
                            0.0,
                            false,
                            ContractionReport{},
                            {}};

    r.point_distance = r.space.distance(r.p1, r.p2).sup();
    SoftPoint q1 = apply_point(r.mapping, r.p1);
    SoftPoint q2 = apply_point(r.mapping, r.p2);
    r.image_distance = r.space.distance(q1, q2).sup();
    r.image_exceeds = r.image_distance > r.point_distance;
    r.banach = estimate_coefficient(r.space, r.mapping, ContractionKind::banach,
                                    ExplicitPairs{{{r.p1, r.p2}}});
    r.factors = projected_factors(r.space, r.mapping);
    return r;
}

/// Example 3.2 fixture: d((x,l),(y,m)) = |x-y|^(1+|l-m|) over labels {0,1}.
/// Every projection d_l is a metric, but identity of indiscernibles fails:
/// the same element at two labels sits at distance zero. The checker runs a
/// pair-only plan (the probed claim concerns pairs; the triple budget is
/// zero and recorded in the report).
struct PowerFamilyReplay {
    SoftMetricSpace space;
    AxiomReport report;
    bool m2_found = false;
    SoftPoint witness_a, witness_b;
    double witness_distance = 0.0;
    bool projections_metric = false; // sampled check of every seed-label projection
};

inline PowerFamilyReplay replay_3_2() {
    auto params = make_numeric_params({0.0, 1.0});
    PowerFamily fam;
    fam.point_part = PointPart::euclidean;

    PowerFamilyReplay r{SoftMetricSpace::analytic(params, 1, fam),
                        AxiomReport{},
                        false,
                        AnalyticPoint({0.0}, 0.0),
                        AnalyticPoint({0.0}, 0.0)};

    SamplePlan plan;
    plan.pair_samples = 500;
    plan.triple_samples = 0;
    plan.seed = 42;
    plan.probe_elements = {5.0};
    r.report = check_axioms(r.space, plan);

    if (const auto* v = r.report.violation_of(2)) {
        r.m2_found = true;
        r.witness_a = v->witness.points.at(0);
        r.witness_b = v->witness.points.at(1);
        r.witness_distance = r.space.distance(r.witness_a, r.witness_b).sup();
    }

    // The projections stay honest scalar metrics even though the family is
    // not a soft metric: sample the axioms of d_l at each seed label.
    r.projections_metric = true;
    Rng rng(7);
    for (double v : r.space.params()->values()) {
        for (int k = 0; k < 200 && r.projections_metric; ++k) {
            double x = rng.uniform(-10.0, 10.0);
            double y = rng.uniform(-10.0, 10.0);
            double z = rng.uniform(-10.0, 10.0);
            double dxy = r.space.project_distance(v, {x}, {y});
            double dyz = r.space.project_distance(v, {y}, {z});
            double dxz = r.space.project_distance(v, {x}, {z});
            if (dxy < 0.0 || (x != y && !(dxy > 0.0)) ||
                dxy != r.space.project_distance(v, {y}, {x}) || dxz > dxy + dyz + 1e-9)
                r.projections_metric = false;
        }
        if (r.space.project_distance(v, {3.0}, {3.0}) != 0.0) r.projections_metric = false;
    }
    return r;
}

/// Example 4.14 fixture: the line with d((x,l),(y,m)) = 1/2 |l-m| + |x-y|
/// over label values in [1, 100], under f(x) = x/5, phi(l) = l + 1/l.
/// Each sampled tuple is pushed through the displayed inequality chain
///   1/2 d1(phi(l),phi(m)) + d(f x, f y)  <=  1/2 d1(l,m) + 1/5 d(x,y)
///                                        <=  3/4 (d1(l,m) + d(x,y)).
/// The final comparator is weaker than 3/4 * dtilde, so the chain does not
/// certify a uniform contraction; the empirical coefficient over the same
/// tuples is reported without asserting one.
struct ReciprocalSumReplay {
    SoftMetricSpace space;
    SoftMapping mapping;
    std::size_t samples = 0;
    std::size_t chain_violations = 0;
    bool chain_holds = false;
    double max_slack_first = 0.0;  // max of L0 - L1 (should stay <= tolerance)
    double max_slack_second = 0.0; // max of L1 - L2
    double empirical_alpha = 0.0;  // sup of d(images)/d(points) over the tuples
    std::string note;
};

inline const char* kReciprocalSumNote =
    "the final comparator 3/4*(d1(l,m)+d(x,y)) is weaker than 3/4*dtilde since "
    "dtilde = 1/2*d1 + d, so the verified chain does not by itself certify a uniform "
    "contraction coefficient for (f,phi); the parameter-part ratio "
    "d1(phi(l),phi(m))/d1(l,m) = 1 - 1/(l*m) approaches 1 as l*m grows. the chain "
    "inequalities are asserted verbatim and the empirical coefficient is reported "
    "without a contraction verdict.";

inline ReciprocalSumReplay replay_4_14(std::size_t samples = 1000, std::uint64_t seed = 42) {
    auto params = make_numeric_params({1.0, 2.0});
    SumFamily fam;
    fam.param_part = ParamPart::abs_diff;
    fam.weight = 0.5;
    fam.point_part = PointPart::euclidean;

    ReciprocalSumReplay r{SoftMetricSpace::analytic(params, 1, fam),
                          SoftMapping{scaling_map(1, 0.2), RecipSumParamMap{}},
                          0, 0, false, 0.0, 0.0, 0.0, ""};
    r.samples = samples;
    r.note = kReciprocalSumNote;

    const double tolerance = 1e-12;
    Rng rng(seed);
    for (std::size_t k = 0; k < samples; ++k) {
        double l = rng.uniform(1.0, 100.0);
        double mlab = rng.uniform(1.0, 100.0);
        double x = rng.uniform(-100.0, 100.0);
        double y = rng.uniform(-100.0, 100.0);

        AnalyticPoint px({x}, l), py({y}, mlab);
        SoftPoint ix = apply_point(r.mapping, px);
        SoftPoint iy = apply_point(r.mapping, py);

        double left = r.space.scalar_distance(as_analytic(ix), as_analytic(iy));
        double mid = 0.5 * std::abs(l - mlab) + std::abs(x - y) / 5.0;
        double right = 0.75 * (std::abs(l - mlab) + std::abs(x - y));

        r.max_slack_first = std::max(r.max_slack_first, left - mid);
        r.max_slack_second = std::max(r.max_slack_second, mid - right);
        if (left > mid + tolerance || mid > right + tolerance) ++r.chain_violations;

        double den = r.space.scalar_distance(px, py);
        if (den > 0.0) r.empirical_alpha = std::max(r.empirical_alpha, left / den);
    }
    r.chain_holds = r.chain_violations == 0;
    return r;
}

} // namespace softfix
