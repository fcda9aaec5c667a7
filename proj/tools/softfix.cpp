// softfix: soft metric spaces, axiom checking, metric-induced topology
// queries and certified fixed-point solving, driven by JSON descriptors.
//
// Exit codes: 0 property holds / solve converged, 1 property violated /
// infeasible / not converged, 2 input error.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "softfix/io.hpp"
#include "softfix/softfix.hpp"

namespace {

using namespace softfix;

constexpr int kExitOk = 0;
constexpr int kExitViolated = 1;
constexpr int kExitInputError = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("E_SYNTAX", path, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Output {
    std::string json_out_path;

    void finish(const json& report) const {
        if (json_out_path.empty()) return;
        std::ofstream out(json_out_path, std::ios::binary);
        if (!out) throw ParseError("E_SYNTAX", json_out_path, "cannot open output file");
        out << report.dump(2) << "\n";
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << std::fixed << v;
    return os.str();
}

std::string point_str(const SoftPoint& p, const SoftMetricSpace& space) {
    return point_to_string(p, space.is_tabulated() ? space.universe().get() : nullptr,
                           space.params().get());
}

json axiom_report_json(const AxiomReport& report, const SoftMetricSpace& space) {
    json out;
    out["exhaustive"] = report.exhaustive;
    out["pairs_checked"] = report.pairs_checked;
    out["triples_checked"] = report.triples_checked;
    out["seed"] = report.seed;
    out["verified"] = report.verified();
    out["summary"] = report.summary();
    out["violations"] = json::array();
    for (const auto& v : report.violations) {
        json vj;
        vj["axiom"] = v.axiom;
        vj["count"] = v.count;
        vj["detail"] = v.witness.detail;
        vj["component"] = space.params()->label(v.witness.component);
        vj["magnitude"] = v.witness.magnitude;
        vj["witness"] = json::array();
        for (const auto& p : v.witness.points) vj["witness"].push_back(point_json(p, space));
        out["violations"].push_back(std::move(vj));
    }
    return out;
}

void print_axiom_report(const AxiomReport& report, const SoftMetricSpace& space) {
    std::cout << "axiom check: " << report.summary() << "\n";
    for (const auto& v : report.violations) {
        std::cout << "  M" << v.axiom << " violated (" << v.count
                  << " witness(es)): " << v.witness.detail << "\n    witness:";
        for (const auto& p : v.witness.points) std::cout << " " << point_str(p, space);
        std::cout << "  component " << space.params()->label(v.witness.component)
                  << "  magnitude " << fmt(v.witness.magnitude) << "\n";
    }
}

json contraction_report_json(const ContractionReport& r, const SoftMetricSpace& space) {
    json out;
    out["kind"] = kind_name(r.kind);
    out["threshold"] = r.threshold();
    out["alpha_hat"] = soft_real_json(r.alpha_hat);
    out["feasible"] = r.feasible;
    out["degenerate_denominator"] = r.degenerate_denominator;
    out["pairs_evaluated"] = r.pairs_evaluated;
    out["exhaustive"] = r.exhaustive;
    if (r.witness) {
        out["witness"] = {{"p", point_json(r.witness->first, space)},
                          {"q", point_json(r.witness->second, space)},
                          {"ratio", r.witness_ratio}};
    }
    return out;
}

void print_contraction_report(const ContractionReport& r, const SoftMetricSpace& space) {
    std::cout << "condition: " << kind_name(r.kind) << " (threshold " << r.threshold() << ")\n";
    std::cout << "alpha_hat: " << r.alpha_hat.to_string() << "\n";
    std::cout << "pairs evaluated: " << r.pairs_evaluated
              << (r.exhaustive ? " (exhaustive)" : " (sampled; feasible means not falsified)")
              << "\n";
    if (r.witness) {
        std::cout << "witness pair: " << point_str(r.witness->first, space) << ", "
                  << point_str(r.witness->second, space) << "  ratio " << fmt(r.witness_ratio)
                  << "\n";
    }
    std::cout << "verdict: " << (r.feasible ? "feasible" : "infeasible") << "\n";
}

PairPlan cli_pair_plan(const SoftMetricSpace& space, std::size_t samples, std::uint64_t seed) {
    return default_pair_plan(space, samples, seed);
}

int cmd_check(const std::string& file, std::size_t samples, std::size_t triples,
              std::uint64_t seed, const Output& output) {
    Scenario scenario = parse_descriptor(read_file(file));
    SamplePlan plan;
    plan.pair_samples = samples;
    plan.triple_samples = triples;
    plan.seed = seed;
    AxiomReport report = check_axioms(scenario.space, plan);
    print_axiom_report(report, scenario.space);

    json out;
    out["command"] = "check";
    out["input"] = file;
    out["report"] = axiom_report_json(report, scenario.space);
    output.finish(out);
    return report.verified() ? kExitOk : kExitViolated;
}

int cmd_repair(const std::string& file, const std::string& out_file, const Output& output) {
    Scenario scenario = parse_descriptor(read_file(file));
    if (!scenario.space.is_tabulated())
        throw ParseError("E_SCHEMA", "$.space", "repair applies to tabulated spaces");
    SoftMetricSpace repaired = repair_to_metric(scenario.space.table(), scenario.space.params(),
                                                scenario.space.universe());
    AxiomReport post = check_axioms(repaired);
    Scenario out_scenario{repaired, scenario.mapping};
    std::ofstream out(out_file, std::ios::binary);
    if (!out) throw ParseError("E_SYNTAX", out_file, "cannot open output file");
    out << serialize_descriptor(out_scenario);

    std::cout << "repaired table written to " << out_file << "\n";
    std::cout << "post-repair " << post.summary() << "\n";

    json report;
    report["command"] = "repair";
    report["input"] = file;
    report["out"] = out_file;
    report["post_repair"] = axiom_report_json(post, repaired);
    output.finish(report);
    return kExitOk;
}

int cmd_contract(const std::string& file, const std::string& kind_str, std::size_t samples,
                 std::uint64_t seed, const Output& output) {
    Scenario scenario = parse_descriptor(read_file(file));
    if (!scenario.mapping)
        throw ParseError("E_SCHEMA", "$.mapping", "contract requires a mapping in the descriptor");
    ContractionKind kind = kind_str == "banach"   ? ContractionKind::banach
                           : kind_str == "kannan" ? ContractionKind::kannan
                                                  : ContractionKind::chatterjea;
    ContractionReport report = estimate_coefficient(scenario.space, *scenario.mapping, kind,
                                                    cli_pair_plan(scenario.space, samples, seed));
    print_contraction_report(report, scenario.space);

    json out;
    out["command"] = "contract";
    out["input"] = file;
    out["seed"] = seed;
    out["samples"] = samples;
    out["report"] = contraction_report_json(report, scenario.space);
    output.finish(out);
    return report.feasible ? kExitOk : kExitViolated;
}

int cmd_solve(const std::string& file, const std::string& kind_str, const std::string& x0_spec,
              double tol, std::size_t max_iter, std::size_t samples, std::uint64_t seed,
              const Output& output) {
    Scenario scenario = parse_descriptor(read_file(file));
    if (!scenario.mapping)
        throw ParseError("E_SCHEMA", "$.mapping", "solve requires a mapping in the descriptor");
    ContractionKind kind = kind_str == "banach"   ? ContractionKind::banach
                           : kind_str == "kannan" ? ContractionKind::kannan
                                                  : ContractionKind::chatterjea;
    SoftPoint x0 = parse_point_spec(x0_spec, scenario.space);
    ContractionReport report = estimate_coefficient(scenario.space, *scenario.mapping, kind,
                                                    cli_pair_plan(scenario.space, samples, seed));
    print_contraction_report(report, scenario.space);

    json out;
    out["command"] = "solve";
    out["input"] = file;
    out["seed"] = seed;
    out["samples"] = samples;
    out["x0"] = x0_spec;
    out["tol"] = tol;
    out["max_iter"] = max_iter;
    out["report"] = contraction_report_json(report, scenario.space);

    if (!report.feasible) {
        std::cout << "solve: condition infeasible, no certified iteration\n";
        out["solve"] = {{"converged", false}, {"reason", "infeasible report"}};
        output.finish(out);
        return kExitViolated;
    }

    IterationTrace trace =
        picard_solve(scenario.space, *scenario.mapping, kind, x0, tol, max_iter, report);
    json solve;
    solve["rate"] = soft_real_json(trace.rate);
    solve["iterations"] = trace.iterates.size() - 1;
    solve["converged"] = trace.converged;
    solve["final_bound"] = soft_real_json(trace.apriori_bounds.back());
    if (trace.converged) {
        solve["fixed_point"] = point_json(*trace.fixed_point, scenario.space);
        solve["residual"] = soft_real_json(*trace.residual);
        std::cout << "solve: converged after " << trace.iterates.size() - 1 << " iterations\n";
        std::cout << "fixed point: " << point_str(*trace.fixed_point, scenario.space) << "\n";
        std::cout << "residual: " << trace.residual->to_string() << "\n";
        std::cout << "final a priori bound: " << trace.apriori_bounds.back().to_string() << "\n";
    } else {
        std::cout << "solve: not converged within " << max_iter << " iterations\n";
        std::cout << "final a priori bound: " << trace.apriori_bounds.back().to_string() << "\n";
    }
    out["solve"] = std::move(solve);
    output.finish(out);
    return trace.converged ? kExitOk : kExitViolated;
}

int cmd_topology(const std::string& file, const std::string& set_spec, const std::string& query,
                 const std::string& point_spec, const Output& output) {
    Scenario scenario = parse_descriptor(read_file(file));
    SoftPoint p = parse_point_spec(point_spec, scenario.space);
    SetSpec set = parse_set_spec(set_spec, scenario.space);
    Region region = query == "interior"  ? Region::interior
                    : query == "closure" ? Region::closure
                                         : Region::boundary;
    bool result = false;
    if (scenario.space.is_tabulated()) {
        SoftSet s = set.set ? *set.set : ball_members(scenario.space, *set.ball);
        result = in_region(scenario.space, s, p, region);
    } else {
        if (!set.ball)
            throw ParseError("E_SCHEMA", "set-spec", "analytic spaces take ball(...) sets");
        result = in_region(scenario.space, *set.ball, p, region);
    }
    std::cout << query << "(" << set_spec << ") contains " << point_spec << ": "
              << (result ? "true" : "false") << "\n";

    json out;
    out["command"] = "topology";
    out["input"] = file;
    out["set"] = set_spec;
    out["query"] = query;
    out["point"] = point_json(p, scenario.space);
    out["result"] = result;
    output.finish(out);
    return result ? kExitOk : kExitViolated;
}

json set_json(const SoftSet& s) {
    json out = json::object();
    for (std::size_t l = 0; l < s.params()->size(); ++l) {
        json elems = json::array();
        for (std::size_t e : s.section(l)) elems.push_back(s.universe()->name(e));
        out[s.params()->label(l)] = std::move(elems);
    }
    return out;
}

int cmd_separate(const std::string& file, const std::string& f1_spec, const std::string& f2_spec,
                 const Output& output) {
    Scenario scenario = parse_descriptor(read_file(file));
    SetSpec f1 = parse_set_spec(f1_spec, scenario.space);
    SetSpec f2 = parse_set_spec(f2_spec, scenario.space);
    if (!f1.set || !f2.set)
        throw ParseError("E_SCHEMA", "set-spec", "separate takes section sets");
    auto [U, V] = separate_closed_sets(scenario.space, *f1.set, *f2.set);

    bool disjoint = intersect_of(U, V).is_null();
    bool covers = subset_of(*f1.set, U) && subset_of(*f2.set, V);
    bool open = is_open(scenario.space, U).open && is_open(scenario.space, V).open;
    std::cout << "U = " << U.to_string() << "\n";
    std::cout << "V = " << V.to_string() << "\n";
    std::cout << "F1 in U and F2 in V: " << (covers ? "true" : "false")
              << "; U and V disjoint: " << (disjoint ? "true" : "false")
              << "; both open: " << (open ? "true" : "false") << "\n";

    json out;
    out["command"] = "separate";
    out["input"] = file;
    out["f1"] = set_json(*f1.set);
    out["f2"] = set_json(*f2.set);
    out["U"] = set_json(U);
    out["V"] = set_json(V);
    out["covers"] = covers;
    out["disjoint"] = disjoint;
    out["open"] = open;
    output.finish(out);
    return covers && disjoint && open ? kExitOk : kExitViolated;
}

int cmd_example(const std::string& id, const Output& output) {
    json out;
    out["command"] = "example";
    out["id"] = id;

    if (id == "3.2") {
        PowerFamilyReplay r = replay_3_2();
        print_axiom_report(r.report, r.space);
        if (r.m2_found) {
            std::cout << "identity of indiscernibles fails: d(" << point_str(r.witness_a, r.space)
                      << ", " << point_str(r.witness_b, r.space) << ") = "
                      << fmt(r.witness_distance) << " between distinct soft points\n";
        }
        std::cout << "sampled projections d_l satisfy the scalar metric axioms: "
                  << (r.projections_metric ? "true" : "false") << "\n";
        out["report"] = axiom_report_json(r.report, r.space);
        out["m2_found"] = r.m2_found;
        out["projections_metric"] = r.projections_metric;
        if (r.m2_found) {
            out["witness"] = {{"p", point_json(r.witness_a, r.space)},
                              {"q", point_json(r.witness_b, r.space)},
                              {"distance", r.witness_distance}};
        }
        output.finish(out);
        return r.report.verified() ? kExitOk : kExitViolated;
    }

    if (id == "4.12") {
        HalvingTriplingReplay r = replay_4_12();
        std::cout << "d(p1, p2)               = " << fmt(r.point_distance) << "\n";
        std::cout << "d((f,phi)p1, (f,phi)p2) = " << fmt(r.image_distance) << "\n";
        std::cout << "image distance exceeds the original: "
                  << (r.image_exceeds ? "true" : "false") << "\n";
        print_contraction_report(r.banach, r.space);
        for (const auto& lf : r.factors)
            std::cout << "projected factor at label " << r.space.params()->label(lf.label) << ": "
                      << (lf.factor ? fmt(*lf.factor) : "undefined (" + lf.note + ")") << "\n";

        out["point_distance"] = r.point_distance;
        out["image_distance"] = r.image_distance;
        out["image_exceeds"] = r.image_exceeds;
        out["report"] = contraction_report_json(r.banach, r.space);
        json factors = json::array();
        for (const auto& lf : r.factors) {
            json fj;
            fj["label"] = r.space.params()->label(lf.label);
            if (lf.factor) fj["factor"] = *lf.factor;
            else fj["note"] = lf.note;
            factors.push_back(std::move(fj));
        }
        out["projected_factors"] = std::move(factors);
        output.finish(out);
        return r.banach.feasible ? kExitOk : kExitViolated;
    }

    if (id == "4.14") {
        ReciprocalSumReplay r = replay_4_14();
        std::cout << "sampled tuples: " << r.samples << "\n";
        std::cout << "chain violations: " << r.chain_violations << "\n";
        std::cout << "max slack, line 1 (definition vs 1/2 d1 + 1/5 d): "
                  << fmt(r.max_slack_first) << "\n";
        std::cout << "max slack, line 2 (vs 3/4 (d1 + d)): " << fmt(r.max_slack_second) << "\n";
        std::cout << "empirical coefficient over the tuples: " << fmt(r.empirical_alpha) << "\n";
        std::cout << "note: " << r.note << "\n";

        out["samples"] = r.samples;
        out["chain_violations"] = r.chain_violations;
        out["chain_holds"] = r.chain_holds;
        out["max_slack_first"] = r.max_slack_first;
        out["max_slack_second"] = r.max_slack_second;
        out["empirical_alpha"] = r.empirical_alpha;
        out["note"] = r.note;
        output.finish(out);
        return r.chain_holds ? kExitOk : kExitViolated;
    }

    throw ParseError("E_SCHEMA", "example", "expected one of 3.2, 4.12, 4.14");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"soft metric spaces: axiom checking, topology queries, certified fixed points"};
    app.require_subcommand(1);

    Output output;
    app.add_option("--json-out", output.json_out_path,
                   "write a machine-readable report to this path");

    std::string file, out_file, kind, x0_spec, set_spec, query, point_spec, f1_spec, f2_spec, id;
    std::size_t samples = 1000, triples = 1000, max_iter = 1000;
    std::uint64_t seed = 42;
    double tol = 1e-10;

    auto* check = app.add_subcommand("check", "verify the metric axioms of a space");
    check->fallthrough();
    check->add_option("file", file)->required();
    check->add_option("--samples", samples, "pair samples on analytic spaces");
    check->add_option("--triples", triples, "triple samples on analytic spaces");
    check->add_option("--seed", seed, "sampling seed");

    auto* repair = app.add_subcommand("repair", "repair a tabulated table into a soft metric");
    repair->fallthrough();
    repair->add_option("file", file)->required();
    repair->add_option("--out", out_file, "output descriptor path")->required();

    auto* contract = app.add_subcommand("contract", "estimate a contraction coefficient");
    contract->fallthrough();
    contract->add_option("file", file)->required();
    contract->add_option("--kind", kind)->required()->check(
        CLI::IsMember({"banach", "kannan", "chatterjea"}));
    contract->add_option("--samples", samples, "pair samples on analytic spaces");
    contract->add_option("--seed", seed, "sampling seed");

    auto* solve = app.add_subcommand("solve", "certified Picard iteration");
    solve->fallthrough();
    solve->add_option("file", file)->required();
    solve->add_option("--kind", kind)->required()->check(
        CLI::IsMember({"banach", "kannan", "chatterjea"}));
    solve->add_option("--x0", x0_spec, "starting soft point, element@label")->required();
    solve->add_option("--tol", tol, "a priori bound tolerance")->required();
    solve->add_option("--max-iter", max_iter, "iteration cap");
    solve->add_option("--samples", samples, "pair samples on analytic spaces");
    solve->add_option("--seed", seed, "sampling seed");

    auto* topology = app.add_subcommand("topology", "region membership queries");
    topology->fallthrough();
    topology->add_option("file", file)->required();
    topology->add_option("--set", set_spec, "section set or ball(center;radius)")->required();
    topology->add_option("--query", query)->required()->check(
        CLI::IsMember({"interior", "closure", "boundary"}));
    topology->add_option("--point", point_spec)->required();

    auto* separate = app.add_subcommand("separate", "separate two disjoint sets by open covers");
    separate->fallthrough();
    separate->add_option("file", file)->required();
    separate->add_option("--f1", f1_spec)->required();
    separate->add_option("--f2", f2_spec)->required();

    auto* example = app.add_subcommand("example", "replay a worked example (3.2, 4.12, 4.14)");
    example->fallthrough();
    example->add_option("id", id)->required()->check(CLI::IsMember({"3.2", "4.12", "4.14"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (app.got_subcommand(check))
            return cmd_check(file, samples, triples, seed, output);
        if (app.got_subcommand(repair)) return cmd_repair(file, out_file, output);
        if (app.got_subcommand(contract))
            return cmd_contract(file, kind, samples, seed, output);
        if (app.got_subcommand(solve))
            return cmd_solve(file, kind, x0_spec, tol, max_iter, samples, seed, output);
        if (app.got_subcommand(topology))
            return cmd_topology(file, set_spec, query, point_spec, output);
        if (app.got_subcommand(separate)) return cmd_separate(file, f1_spec, f2_spec, output);
        if (app.got_subcommand(example)) return cmd_example(id, output);
    } catch (const ParseError& e) {
        std::cerr << "input error [" << e.code() << "] at " << e.path() << ": " << e.what()
                  << "\n";
        return kExitInputError;
    } catch (const DegenerateGeometryError& e) {
        std::cerr << "separation impossible: " << e.what() << "\n";
        return kExitViolated;
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::runtime_error& e) {
        std::cerr << "aborted: " << e.what() << "\n";
        return kExitViolated;
    }
    return kExitInputError;
}
