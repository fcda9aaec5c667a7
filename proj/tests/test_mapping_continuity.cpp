#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace softfix;
namespace tst = softfix::testing;

namespace {

SoftMetricSpace line_space(ParamSetPtr params, double weight = 1.0) {
    SumFamily fam;
    fam.weight = weight;
    fam.point_part = PointPart::euclidean;
    return SoftMetricSpace::analytic(std::move(params), 1, fam);
}

} // namespace

TEST_CASE("applying a soft mapping moves the element and the label together") {
    SECTION("halving with label tripling") {
        SoftMapping m{scaling_map(2, 0.5), AffineParamMap{3.0, 0.0}};
        SoftPoint image = apply_point(m, AnalyticPoint({0.0, 1.0}, 2.0));
        const auto& ap = as_analytic(image);
        CHECK(ap.coords == std::vector<double>{0.0, 0.5});
        CHECK(ap.label == 6.0);
    }
    SECTION("identity leaves the point alone") {
        SoftMapping id{scaling_map(2, 1.0), AffineParamMap{1.0, 0.0}};
        SoftPoint p = AnalyticPoint({4.0, -1.0}, 3.0);
        CHECK(apply_point(id, p) == p);
    }
    SECTION("fifth scaling with reciprocal-sum label map") {
        SoftMapping m{scaling_map(1, 0.2), RecipSumParamMap{}};
        SoftPoint image = apply_point(m, AnalyticPoint({10.0}, 2.0));
        const auto& ap = as_analytic(image);
        CHECK(ap.coords == std::vector<double>{2.0});
        CHECK(ap.label == 2.5);
        CHECK_THROWS_AS(apply_point(m, AnalyticPoint({1.0}, 0.0)), std::domain_error);
    }
    SECTION("finite points require table maps and in-range indices") {
        SoftMapping tables{TablePointMap{{1, 0}}, TableParamMap{{0}}};
        CHECK(apply_point(tables, FinitePoint{0, 0}) == SoftPoint(FinitePoint{1, 0}));
        CHECK_THROWS_AS(apply_point(tables, FinitePoint{0, 1}), std::domain_error);
        CHECK_THROWS_AS(apply_point(tables, FinitePoint{2, 0}), std::domain_error);
        SoftMapping wrong{scaling_map(1, 0.5), AffineParamMap{}};
        CHECK_THROWS_AS(apply_point(wrong, FinitePoint{0, 0}), std::domain_error);
    }
}

TEST_CASE("images and preimages of soft sets") {
    auto params = make_params({"e1", "e2"});
    auto universe = make_universe({"a", "b"});
    Rng rng(71);
    SoftMetricSpace space = tst::random_repaired_space(params, universe, rng);

    SoftMapping swap{TablePointMap{{1, 0}}, TableParamMap{{0, 1}}};
    SoftSet a_e1 = from_points(params, universe, {{0, 0}});

    CHECK(image_of(swap, a_e1, space) == from_points(params, universe, {{1, 0}}));
    CHECK(image_of(swap, SoftSet::null_set(params, universe), space).is_null());
    CHECK(preimage_of(swap, SoftSet::absolute(params, universe), space) ==
          SoftSet::absolute(params, universe));
}

TEST_CASE("image and preimage form the usual adjunction on random mappings") {
    auto params = make_params({"e1", "e2"});
    auto universe = make_universe({"a", "b", "c"});
    Rng rng(73);
    SoftMetricSpace space = tst::random_repaired_space(params, universe, rng);
    for (int k = 0; k < 40; ++k) {
        TablePointMap f;
        for (std::size_t e = 0; e < 3; ++e) f.image.push_back(rng.index(3));
        TableParamMap phi;
        for (std::size_t l = 0; l < 2; ++l) phi.image.push_back(rng.index(2));
        SoftMapping m{f, phi};

        SoftSet S = tst::random_soft_set(params, universe, rng);
        SoftSet T = tst::random_soft_set(params, universe, rng);

        CHECK(subset_of(S, preimage_of(m, image_of(m, S, space), space)));
        CHECK(subset_of(image_of(m, preimage_of(m, T, space), space), T));

        // Image commutes with the soft-point decomposition.
        SoftSet rebuilt(params, universe);
        for (const auto& p : decompose(S))
            rebuilt.add(as_finite(apply_point(m, SoftPoint(p))));
        CHECK(rebuilt == image_of(m, S, space));
    }
}

TEST_CASE("finite spaces are trivially continuous") {
    auto params = make_params({"e1"});
    auto universe = make_universe({"a", "b"});
    Rng rng(79);
    SoftMetricSpace space = tst::random_repaired_space(params, universe, rng);
    SoftMapping m{TablePointMap{{1, 0}}, TableParamMap{{0}}};
    auto report = check_continuity_at(space, space, m, FinitePoint{0, 0},
                                      {SoftReal::constant(params, 0.5)});
    CHECK(report.discrete_trivial);
    CHECK(report.all_witnessed());
}

TEST_CASE("a certified contraction is continuous with delta equal to epsilon") {
    auto params = make_params({"e1"}, {0.0});
    SoftMetricSpace space = line_space(params);
    SoftMapping halving{scaling_map(1, 0.5), AffineParamMap{1.0, 0.0}};

    GridPairs grid;
    auto report = estimate_coefficient(space, halving, ContractionKind::banach, grid);
    REQUIRE(report.feasible);

    Rng rng(83);
    for (int k = 0; k < 5; ++k) {
        AnalyticPoint p({rng.uniform(-5, 5)}, rng.uniform(-2, 2));
        std::vector<SoftReal> eps_grid = {SoftReal::constant(params, 1.0),
                                          SoftReal::constant(params, 0.01)};
        auto cont = check_continuity_at(space, space, halving, p, eps_grid);
        REQUIRE(cont.verdicts.size() == 2);
        for (const auto& v : cont.verdicts) {
            CHECK(v.witnessed);
            CHECK(v.delta == v.epsilon.inf()); // witnessed at the first level
        }
    }
}

TEST_CASE("affine maps with small gains are continuous at sampled points") {
    auto params = make_params({"e1"}, {0.0});
    SoftMetricSpace space = line_space(params);
    // Independent gain bound: max(|phi slope|, |A|) = max(0.8, 0.9) = 0.9 < 1,
    // so delta = epsilon must witness at every point.
    AffinePointMap f = scaling_map(1, -0.9);
    SoftMapping m{f, AffineParamMap{-0.8, 2.0}};
    Rng rng(89);
    for (int k = 0; k < 5; ++k) {
        AnalyticPoint p({rng.uniform(-5, 5)}, rng.uniform(-2, 2));
        auto cont = check_continuity_at(space, space, m, p, {SoftReal::constant(params, 0.25)});
        REQUIRE(cont.verdicts.size() == 1);
        CHECK(cont.verdicts[0].witnessed);
        CHECK(cont.verdicts[0].delta == 0.25);
    }
}

TEST_CASE("an expanding map needs a smaller delta than epsilon") {
    auto params = make_params({"e1"}, {0.0});
    SoftMetricSpace space = line_space(params);
    SoftMapping tripling{scaling_map(1, 3.0), AffineParamMap{1.0, 0.0}};
    auto cont = check_continuity_at(space, space, tripling, AnalyticPoint({1.0}, 0.0),
                                    {SoftReal::constant(params, 0.3)});
    REQUIRE(cont.verdicts.size() == 1);
    CHECK(cont.verdicts[0].witnessed);
    CHECK(cont.verdicts[0].delta < 0.3);
    CHECK(cont.verdicts[0].delta >= 0.3 / 8.0); // 3 * (0.3/8) < 0.3 suffices
}

TEST_CASE("continuity equivalences hold and agree on tabulated spaces") {
    auto params = make_params({"e1", "e2"});
    auto universe = make_universe({"a", "b"});
    Rng rng(97);
    SoftMetricSpace space = tst::random_repaired_space(params, universe, rng);

    SECTION("identity mapping, with equality in the image-closure clause") {
        SoftMapping id{TablePointMap{{0, 1}}, TableParamMap{{0, 1}}};
        auto report = check_continuity_equivalences(space, space, id);
        CHECK(report.exhaustive);
        CHECK(report.all_hold());
        CHECK(report.all_agree());
        for (int k = 0; k < 20; ++k) {
            SoftSet F = tst::random_soft_set(params, universe, rng);
            CHECK(image_of(id, closure_set(space, F), space) ==
                  closure_set(space, image_of(id, F, space)));
        }
    }
    SECTION("constant mapping") {
        SoftMapping constant{TablePointMap{{0, 0}}, TableParamMap{{0, 0}}};
        auto report = check_continuity_equivalences(space, space, constant);
        CHECK(report.all_hold());
        CHECK(report.all_agree());
    }
    SECTION("mapping between two different spaces") {
        auto cod_params = make_params({"u"});
        auto cod_universe = make_universe({"x", "y", "z"});
        SoftMetricSpace cod = tst::random_repaired_space(cod_params, cod_universe, rng);
        SoftMapping m{TablePointMap{{2, 0}}, TableParamMap{{0, 0}}};
        auto report = check_continuity_equivalences(space, cod, m);
        CHECK(report.all_hold());
        CHECK(report.all_agree());
    }
}

TEST_CASE("sequential probes verify convergence of images") {
    auto params = make_params({"e1"}, {1.0});
    SoftMetricSpace space = line_space(params);

    SECTION("element-perturbed sequence under a contraction") {
        SoftMapping m{scaling_map(1, 0.5), AffineParamMap{1.0, 0.0}};
        AnalyticPoint p({2.0}, 1.0);
        auto gen = [&](std::size_t n) {
            return SoftPoint(AnalyticPoint({2.0 + 0.005 / static_cast<double>(n)}, 1.0));
        };
        auto verdict = sequential_probe(space, space, m, gen, p);
        CHECK(verdict.passed);
        // Image distance is 0.5 * 0.005 / n, crossing 1e-6 at n = 2500;
        // the exact boundary value may round either way.
        CHECK(verdict.first_n >= 2500);
        CHECK(verdict.first_n <= 2501);
    }

    SECTION("label-perturbed sequence under a numeric-affine parameter map") {
        SoftMapping m{scaling_map(1, 1.0), AffineParamMap{0.5, 0.0}};
        AnalyticPoint p({2.0}, 1.0);
        auto gen = [&](std::size_t n) {
            return SoftPoint(AnalyticPoint({2.0}, 1.0 + 0.005 / static_cast<double>(n)));
        };
        auto verdict = sequential_probe(space, space, m, gen, p);
        CHECK(verdict.passed);
        // Image distance is 0.5 * w * 0.005 / n, crossing 1e-6 at n = 2500.
        CHECK(verdict.first_n >= 2500);
        CHECK(verdict.first_n <= 2501);
    }

    SECTION("eventually constant sequences on a finite space pass trivially") {
        auto fparams = make_params({"e1", "e2"});
        auto universe = make_universe({"a", "b"});
        Rng rng(101);
        SoftMetricSpace finite = tst::random_repaired_space(fparams, universe, rng);
        SoftMapping m{TablePointMap{{1, 0}}, TableParamMap{{1, 1}}};
        auto gen = [&](std::size_t n) {
            return SoftPoint(n < 5 ? FinitePoint{1, 0} : FinitePoint{0, 0});
        };
        auto verdict = sequential_probe(finite, finite, m, gen, FinitePoint{0, 0});
        CHECK(verdict.passed);
        CHECK(verdict.first_n == 5);
    }

    SECTION("a non-converging generator is rejected as a precondition failure") {
        SoftMapping m{scaling_map(1, 0.5), AffineParamMap{1.0, 0.0}};
        AnalyticPoint p({0.0}, 1.0);
        auto stuck = [&](std::size_t) { return SoftPoint(AnalyticPoint({1.0}, 1.0)); };
        CHECK_THROWS_AS(sequential_probe(space, space, m, stuck, p), std::invalid_argument);

        auto oscillating = [&](std::size_t n) {
            double off = (n % 2 == 0) ? 1.0 / static_cast<double>(n) : 2.0 / static_cast<double>(n);
            return SoftPoint(AnalyticPoint({0.0 + off}, 1.0));
        };
        CHECK_THROWS_AS(sequential_probe(space, space, m, oscillating, p),
                        std::invalid_argument);
    }
}
