#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace softfix;
namespace tst = softfix::testing;

namespace {

SoftMetricSpace plane_sum_space(ParamSetPtr params) {
    SumFamily fam;
    fam.param_part = ParamPart::abs_diff;
    fam.weight = 1.0;
    fam.point_part = PointPart::euclidean;
    return SoftMetricSpace::analytic(std::move(params), 2, fam);
}

/// 3 elements x 1 label, d(a,b) = d(b,c) = 1 but d(a,c) = 3: a triangle
/// violation with witness (a, b, c).
RawDistanceTable broken_triangle_table(const ParamSetPtr& params) {
    auto at = [&](double v) { return SoftReal::constant(params, v); };
    return {
        {at(0), at(1), at(3)},
        {at(1), at(0), at(1)},
        {at(3), at(1), at(0)},
    };
}

} // namespace

TEST_CASE("analytic sum-family distances reproduce the plane fixture values") {
    auto params = make_numeric_params({1.0, 2.0});
    SoftMetricSpace space = plane_sum_space(params);

    AnalyticPoint p1({0.0, 1.0}, 2.0);
    AnalyticPoint p2({1.0, 0.0}, 1.0);
    SoftReal d = space.distance(p1, p2);
    CHECK(d.sup() == Catch::Approx(1.0 + std::sqrt(2.0)).margin(1e-15));
    CHECK(d.sup() == d.inf()); // analytic distances are constant soft reals

    AnalyticPoint q1({0.0, 0.5}, 6.0);
    AnalyticPoint q2({0.5, 0.0}, 3.0);
    CHECK(space.distance(q1, q2).sup() ==
          Catch::Approx(3.0 + std::sqrt(2.0) / 2.0).margin(1e-15));

    CHECK(space.distance(p1, p1).is_zero());
}

TEST_CASE("distance is symmetric bit-exactly") {
    auto params = make_params({"e1", "e2"});
    auto universe = make_universe({"a", "b", "c"});
    Rng rng(31);
    SoftMetricSpace space = tst::random_repaired_space(params, universe, rng);
    auto pts = space.soft_points();
    for (const auto& p : pts)
        for (const auto& q : pts) CHECK(space.distance(p, q) == space.distance(q, p));

    SoftMetricSpace plane = plane_sum_space(make_numeric_params({0.0, 1.0}));
    for (int i = 0; i < 50; ++i) {
        AnalyticPoint p({rng.uniform(-9, 9), rng.uniform(-9, 9)}, rng.uniform(-3, 3));
        AnalyticPoint q({rng.uniform(-9, 9), rng.uniform(-9, 9)}, rng.uniform(-3, 3));
        CHECK(plane.distance(p, q) == plane.distance(q, p));
    }
}

TEST_CASE("tabulated lookups reject unknown points") {
    auto params = make_params({"e1"});
    auto universe = make_universe({"a", "b"});
    Rng rng(5);
    SoftMetricSpace space = tst::random_repaired_space(params, universe, rng);
    CHECK_THROWS_AS(space.distance(FinitePoint{2, 0}, FinitePoint{0, 0}), std::domain_error);
    CHECK_THROWS_AS(space.distance(FinitePoint{0, 1}, FinitePoint{0, 0}), std::domain_error);
    CHECK_THROWS_AS(space.distance(AnalyticPoint({1.0}, 0.0), FinitePoint{0, 0}),
                    std::domain_error);
}

TEST_CASE("axiom checker flags the power family on identity of indiscernibles") {
    auto params = make_numeric_params({0.0, 1.0});
    PowerFamily fam;
    fam.point_part = PointPart::euclidean;
    SoftMetricSpace space = SoftMetricSpace::analytic(params, 1, fam);

    SamplePlan plan;
    plan.pair_samples = 200;
    plan.triple_samples = 0;
    plan.probe_elements = {5.0};
    AxiomReport report = check_axioms(space, plan);

    REQUIRE_FALSE(report.verified());
    const auto* m2 = report.violation_of(2);
    REQUIRE(m2 != nullptr);
    const auto& a = as_analytic(m2->witness.points[0]);
    const auto& b = as_analytic(m2->witness.points[1]);
    CHECK(a.coords == std::vector<double>{5.0});
    CHECK(b.coords == std::vector<double>{5.0});
    CHECK(a.label != b.label);
    CHECK(space.distance(m2->witness.points[0], m2->witness.points[1]).is_zero());

    CHECK(replay_3_2().projections_metric);
}

TEST_CASE("the power family also breaks the triangle inequality once triples are sampled") {
    auto params = make_numeric_params({0.0, 1.0});
    PowerFamily fam;
    fam.point_part = PointPart::euclidean;
    SoftMetricSpace space = SoftMetricSpace::analytic(params, 1, fam);

    // Explicit witness first: 4 = d(x_0, z_1) > d(x_0, y_0) + d(y_0, z_1) = 2.
    AnalyticPoint x({0.0}, 0.0), y({1.0}, 0.0), z({2.0}, 1.0);
    double lhs = space.distance(x, z).sup();
    double rhs = (space.distance(x, y) + space.distance(y, z)).sup();
    CHECK(lhs == 4.0);
    CHECK(rhs == 2.0);

    SamplePlan plan;
    plan.pair_samples = 200;
    plan.triple_samples = 4000;
    AxiomReport report = check_axioms(space, plan);
    CHECK(report.violation_of(4) != nullptr);
}

TEST_CASE("sum family is not falsified under heavy sampling") {
    SoftMetricSpace space = plane_sum_space(make_numeric_params({1.0, 2.0}));
    SamplePlan plan;
    plan.pair_samples = 10000;
    plan.triple_samples = 10000;
    AxiomReport report = check_axioms(space, plan);
    CHECK(report.verified());
    CHECK_FALSE(report.exhaustive);
    CHECK(report.summary().find("not falsified") != std::string::npos);
}

TEST_CASE("exhaustive checker pinpoints a tabulated triangle violation") {
    auto params = make_params({"e1"});
    auto universe = make_universe({"a", "b", "c"});
    SoftMetricSpace space =
        SoftMetricSpace::tabulated(params, universe, broken_triangle_table(params));

    AxiomReport report = check_axioms(space);
    REQUIRE_FALSE(report.verified());
    CHECK(report.exhaustive);
    const auto* m4 = report.violation_of(4);
    REQUIRE(m4 != nullptr);
    REQUIRE(m4->witness.points.size() == 3);
    CHECK(as_finite(m4->witness.points[0]) == FinitePoint{0, 0});
    CHECK(as_finite(m4->witness.points[1]) == FinitePoint{1, 0});
    CHECK(as_finite(m4->witness.points[2]) == FinitePoint{2, 0});
    CHECK(m4->witness.magnitude == Catch::Approx(1.0));
}

TEST_CASE("repair closes the triangle violation to the shortest path") {
    auto params = make_params({"e1"});
    auto universe = make_universe({"a", "b", "c"});
    SoftMetricSpace space = repair_to_metric(broken_triangle_table(params), params, universe);
    CHECK(space.distance(FinitePoint{0, 0}, FinitePoint{2, 0}).sup() == 2.0);
    CHECK(check_axioms(space).verified());
}

TEST_CASE("repair symmetrizes by componentwise min") {
    auto params = make_params({"e1"});
    auto universe = make_universe({"a", "b"});
    auto at = [&](double v) { return SoftReal::constant(params, v); };
    RawDistanceTable raw = {{at(0), at(1)}, {at(3), at(0)}};
    SoftMetricSpace space = repair_to_metric(raw, params, universe);
    CHECK(space.distance(FinitePoint{0, 0}, FinitePoint{1, 0}).sup() == 1.0);
    CHECK(space.distance(FinitePoint{1, 0}, FinitePoint{0, 0}).sup() == 1.0);
}

TEST_CASE("repair leaves a genuine metric unchanged and bumps zero components") {
    auto params = make_params({"e1", "e2"});
    auto universe = make_universe({"a", "b"});
    auto sr = [&](double x, double y) { return SoftReal(params, {x, y}); };

    SECTION("already a metric") {
        RawDistanceTable metric = {
            {sr(0, 0), sr(1, 1.5), sr(1.2, 1), sr(1, 1)},
            {sr(1, 1.5), sr(0, 0), sr(1, 1), sr(1.4, 1.1)},
            {sr(1.2, 1), sr(1, 1), sr(0, 0), sr(1.1, 1.2)},
            {sr(1, 1), sr(1.4, 1.1), sr(1.1, 1.2), sr(0, 0)},
        };
        SoftMetricSpace space = repair_to_metric(metric, params, universe);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) CHECK(space.table()[i][j] == metric[i][j]);
    }

    SECTION("zero off-diagonal component gets bumped") {
        RawDistanceTable raw = {
            {sr(0, 0), sr(0, 1), sr(1, 1), sr(1, 1)},
            {sr(0, 1), sr(0, 0), sr(1, 1), sr(1, 1)},
            {sr(1, 1), sr(1, 1), sr(0, 0), sr(1, 1)},
            {sr(1, 1), sr(1, 1), sr(1, 1), sr(0, 0)},
        };
        SoftMetricSpace space = repair_to_metric(raw, params, universe);
        double bumped = space.distance(FinitePoint{0, 0}, FinitePoint{1, 0})[0];
        CHECK(bumped > 0.0);
        CHECK(bumped == Catch::Approx(1e-3).margin(1e-12)); // smallest positive entry (1) * 1e-3
        CHECK(check_axioms(space).verified());
    }

    SECTION("negative entries are rejected") {
        RawDistanceTable raw = {{sr(0, 0), sr(-1, 1)}, {sr(-1, 1), sr(0, 0)}};
        CHECK_THROWS_AS(repair_to_metric(raw, params, make_universe({"a"})), std::domain_error);
    }
}

TEST_CASE("projections read one component at one label") {
    SECTION("sum family: the parameter part vanishes") {
        SoftMetricSpace space = plane_sum_space(make_numeric_params({1.0, 2.0}));
        std::vector<double> x{0.0, 3.0}, y{4.0, 0.0};
        CHECK(space.project_distance(1.0, x, y) == 5.0);
        CHECK(space.project_distance(2.0, x, y) == 5.0);
    }

    SECTION("power family projects to the base metric even though the family fails M2") {
        PowerFamily fam;
        fam.point_part = PointPart::euclidean;
        SoftMetricSpace space = SoftMetricSpace::analytic(make_numeric_params({0.0, 1.0}), 1, fam);
        CHECK(space.project_distance(0.0, {1.0}, {3.5}) == 2.5);
        CHECK(space.project_distance(1.0, {1.0}, {3.5}) == 2.5);
    }

    SECTION("tabulated projection is a table lookup") {
        auto params = make_params({"e1", "e2"});
        auto universe = make_universe({"a", "b"});
        Rng rng(17);
        SoftMetricSpace space = tst::random_repaired_space(params, universe, rng);
        for (std::size_t l = 0; l < 2; ++l) {
            auto m = space.project_table(l);
            REQUIRE(m.size() == 2);
            CHECK(m[0][1] == space.distance(FinitePoint{0, l}, FinitePoint{1, l})[l]);
            CHECK(m[0][0] == 0.0);
        }
    }
}

TEST_CASE("repaired random spaces project to scalar metrics") {
    auto params = make_params({"e1", "e2"});
    auto universe = make_universe({"a", "b", "c"});
    Rng rng(33);
    for (int k = 0; k < 25; ++k) {
        SoftMetricSpace space = tst::random_repaired_space(params, universe, rng);
        REQUIRE(check_axioms(space).verified());
        for (std::size_t l = 0; l < 2; ++l)
            CHECK(tst::scalar_metric_axioms_hold(space.project_table(l)));
    }
}

// A sound soft metric may still carry a zero component between distinct
// points (only the all-zero vector is forbidden); such a space passes the
// axioms yet its projection is not a scalar metric. Repair removes exactly
// this degeneracy, which is why the projection guarantee is stated for
// repaired tables.
TEST_CASE("printed identity-of-indiscernibles admits zero components") {
    auto params = make_params({"e1", "e2"});
    auto universe = make_universe({"a", "b"});
    auto sr = [&](double x, double y) { return SoftReal(params, {x, y}); };
    RawDistanceTable table = {
        {sr(0, 0), sr(0, 1), sr(1, 1), sr(1, 1)},
        {sr(0, 1), sr(0, 0), sr(1, 1), sr(1, 1)},
        {sr(1, 1), sr(1, 1), sr(0, 0), sr(1, 1)},
        {sr(1, 1), sr(1, 1), sr(1, 1), sr(0, 0)},
    };
    SoftMetricSpace space = SoftMetricSpace::tabulated(params, universe, table);
    CHECK(check_axioms(space).verified());
    CHECK_FALSE(tst::scalar_metric_axioms_hold(space.project_table(0)));
    CHECK(tst::scalar_metric_axioms_hold(space.project_table(1)));
}
