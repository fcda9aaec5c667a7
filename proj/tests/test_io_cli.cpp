#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "softfix/io.hpp"
#include "test_support.hpp"

using namespace softfix;

namespace {

const std::string kFixtures = SOFTFIX_FIXTURES;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string check_code(const std::string& text) {
    try {
        parse_descriptor(text);
    } catch (const ParseError& e) {
        return e.code();
    }
    return "";
}

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(SOFTFIX_BIN) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("minimal one-point descriptor parses with a forced zero diagonal") {
    Scenario s = parse_descriptor(R"({
        "parameters": [{"label": "e1"}],
        "space": {"backend": "tabulated", "universe": ["a"], "distances": []}
    })");
    CHECK(s.space.is_tabulated());
    CHECK(s.space.soft_point_count() == 1);
    CHECK(s.space.distance(FinitePoint{0, 0}, FinitePoint{0, 0}).is_zero());
    CHECK_FALSE(s.mapping);
}

TEST_CASE("descriptor diagnostics carry distinct codes") {
    CHECK(check_code("{ not json") == "E_SYNTAX");
    CHECK(check_code(R"({"parameters": [{"label":"x"},{"label":"x"}],
        "space": {"backend":"tabulated","universe":["a"],"distances":[]}})") == "E_DUP_LABEL");
    CHECK(check_code(R"({"parameters": [{"label":"x"}], "spice": {}})") == "E_SCHEMA");
    CHECK(check_code(R"({"parameters": [{"label":"x"}],
        "space": {"backend":"tabulated","universe":["a"],"distances":[]}, "extra": 1})") ==
          "E_SCHEMA");
    CHECK(check_code(R"({"parameters": [{"label":"x","value":1},{"label":"y"}],
        "space": {"backend":"tabulated","universe":["a"],"distances":[]}})") == "E_SCHEMA");

    // dangling references and bad numbers in the distance table
    std::string base = R"({"parameters": [{"label":"e"}],
        "space": {"backend":"tabulated","universe":["a","b"],"distances":[%]}})";
    auto with = [&](const std::string& d) {
        std::string t = base;
        return t.replace(t.find('%'), 1, d);
    };
    CHECK(check_code(with(R"({"p":["z","e"],"q":["b","e"],"value":[1]})")) == "E_DANGLING_REF");
    CHECK(check_code(with(R"({"p":["a","zz"],"q":["b","e"],"value":[1]})")) == "E_DANGLING_REF");
    CHECK(check_code(with(R"({"p":["a","e"],"q":["b","e"],"value":[-1]})")) == "E_BAD_VALUE");
    CHECK(check_code(with(R"({"p":["a","e"],"q":["a","e"],"value":[1]})")) == "E_SCHEMA");
    CHECK(check_code(with(R"({"p":["a","e"],"q":["b","e"],"value":[1,2]})")) == "E_SCHEMA");
    // missing pair entirely
    CHECK(check_code(R"({"parameters": [{"label":"e"}],
        "space": {"backend":"tabulated","universe":["a","b"],"distances":[]}})") == "E_SCHEMA");
    // duplicate pair (other orientation)
    CHECK(check_code(with(R"({"p":["a","e"],"q":["b","e"],"value":[1]},
                           {"p":["b","e"],"q":["a","e"],"value":[1]})")) == "E_SCHEMA");
}

TEST_CASE("analytic descriptor schema rules") {
    std::string head = R"({"parameters": [{"label":"0","value":0},{"label":"1","value":1}],
        "space": {"backend":"analytic","dim":1,"metric":%}})";
    auto with = [&](const std::string& m) {
        std::string t = head;
        return t.replace(t.find('%'), 1, m);
    };
    CHECK(check_code(with(R"({"family":"sum","param":{"kind":"abs_diff","weight":1},
        "point":{"kind":"euclidean"}})")) == "");
    CHECK(check_code(with(R"({"family":"sum","param":{"kind":"capped_abs_diff","weight":1},
        "point":{"kind":"euclidean"}})")) == "E_SCHEMA"); // cap required
    CHECK(check_code(with(R"({"family":"sum","param":{"kind":"abs_diff","weight":0},
        "point":{"kind":"euclidean"}})")) == "E_BAD_VALUE");
    CHECK(check_code(with(R"({"family":"power","point":{"kind":"euclidean"}})")) == "");
    CHECK(check_code(with(R"({"family":"power","param":{"kind":"abs_diff","weight":1},
        "point":{"kind":"euclidean"}})")) == "E_SCHEMA"); // power family takes no param record

    CHECK(check_code(R"({"parameters": [{"label":"0"}],
        "space": {"backend":"analytic","dim":1,
        "metric":{"family":"power","point":{"kind":"euclidean"}}}})") ==
          "E_SCHEMA"); // labels need values
}

TEST_CASE("mapping records must match the backend and be total") {
    std::string tab = R"({"parameters": [{"label":"e"}],
        "space": {"backend":"tabulated","universe":["a","b"],
                  "distances":[{"p":["a","e"],"q":["b","e"],"value":[1]}]},
        "mapping": %})";
    auto with_tab = [&](const std::string& m) {
        std::string t = tab;
        return t.replace(t.find('%'), 1, m);
    };
    CHECK(check_code(with_tab(R"({"f":{"kind":"table","map":{"a":"b","b":"a"}},
        "phi":{"kind":"table","map":{"e":"e"}}})")) == "");
    CHECK(check_code(with_tab(R"({"f":{"kind":"affine","A":[[1]],"b":[0]},
        "phi":{"kind":"table","map":{"e":"e"}}})")) == "E_SCHEMA");
    CHECK(check_code(with_tab(R"({"f":{"kind":"table","map":{"a":"b"}},
        "phi":{"kind":"table","map":{"e":"e"}}})")) == "E_SCHEMA"); // b unmapped
    CHECK(check_code(with_tab(R"({"f":{"kind":"table","map":{"a":"z","b":"a"}},
        "phi":{"kind":"table","map":{"e":"e"}}})")) == "E_DANGLING_REF");
    CHECK(check_code(with_tab(R"({"f":{"kind":"table","map":{"a":"b","b":"a"}},
        "phi":{"kind":"recip_sum"}})")) == "E_SCHEMA"); // numeric phi on tabulated
}

TEST_CASE("serialization round-trips fixture descriptors") {
    for (const std::string name :
         {"halving_line.json", "plane_tripling.json", "tabulated_pair.json",
          "raw_triangle.json", "power_line.json"}) {
        Scenario first = parse_descriptor(slurp(kFixtures + "/" + name));
        std::string text = serialize_descriptor(first);
        Scenario second = parse_descriptor(text);
        CHECK(serialize_descriptor(second) == text);
        CHECK(descriptor_json(second) == descriptor_json(first));
    }
}

TEST_CASE("point and set spec parsing") {
    Scenario tab = parse_descriptor(slurp(kFixtures + "/tabulated_pair.json"));
    CHECK(parse_point_spec("b@e2", tab.space) == SoftPoint(FinitePoint{1, 1}));
    CHECK_THROWS_AS(parse_point_spec("z@e1", tab.space), ParseError);
    CHECK_THROWS_AS(parse_point_spec("b@zz", tab.space), ParseError);

    auto set = parse_set_spec("e1:a,b;e2:a", tab.space);
    REQUIRE(set.set);
    CHECK(set.set->cardinality() == 3);
    CHECK(set.set->contains(FinitePoint{0, 1}));
    auto empty_section = parse_set_spec("e1:", tab.space);
    REQUIRE(empty_section.set);
    CHECK(empty_section.set->is_null());

    Scenario line = parse_descriptor(slurp(kFixtures + "/halving_line.json"));
    SoftPoint p = parse_point_spec("1.5@e1", line.space);
    CHECK(as_analytic(p).coords == std::vector<double>{1.5});
    CHECK(as_analytic(p).label == 0.0); // label resolved by name
    SoftPoint q = parse_point_spec("2@0.25", line.space);
    CHECK(as_analytic(q).label == 0.25); // numeric label values allowed

    auto ball_spec = parse_set_spec("ball(0@e1;2)", line.space);
    REQUIRE(ball_spec.ball);
    CHECK(ball_spec.ball->radius.sup() == 2.0);
    CHECK_FALSE(ball_spec.ball->closed);

    Scenario plane = parse_descriptor(slurp(kFixtures + "/plane_tripling.json"));
    SoftPoint r = parse_point_spec("0,1@2", plane.space);
    CHECK(as_analytic(r).coords == std::vector<double>({0.0, 1.0}));
    CHECK_THROWS_AS(parse_point_spec("0@2", plane.space), ParseError); // wrong arity
}

TEST_CASE("cli: worked-example replays and their exit codes") {
    auto r412 = run_cli("example 4.12");
    CHECK(r412.exit_code == 1); // not a soft contraction
    CHECK(r412.out.find("3.707106781187") != std::string::npos);
    CHECK(r412.out.find("2.414213562373") != std::string::npos);
    CHECK(r412.out.find("infeasible") != std::string::npos);
    CHECK(r412.out.find("0.500000000000") != std::string::npos); // projected factors

    auto r32 = run_cli("example 3.2");
    CHECK(r32.exit_code == 1); // the axioms fail
    CHECK(r32.out.find("M2") != std::string::npos);
    CHECK(r32.out.find("5") != std::string::npos);

    auto r414 = run_cli("example 4.14");
    CHECK(r414.exit_code == 0);
    CHECK(r414.out.find("empirical coefficient") != std::string::npos);
    CHECK(r414.out.find("note:") != std::string::npos);
}

TEST_CASE("cli: check, repair, and the repaired output") {
    std::string fixture = kFixtures + "/tabulated_pair.json";
    CHECK(run_cli("check " + fixture).exit_code == 0);

    std::string broken = kFixtures + "/raw_triangle.json";
    auto check_broken = run_cli("check " + broken);
    CHECK(check_broken.exit_code == 1);
    CHECK(check_broken.out.find("M4") != std::string::npos);

    std::string repaired = temp_path("softfix_repaired.json");
    CHECK(run_cli("repair " + broken + " --out " + repaired).exit_code == 0);
    CHECK(run_cli("check " + repaired).exit_code == 0);

    auto post = parse_descriptor(slurp(repaired));
    CHECK(post.space.distance(FinitePoint{0, 0}, FinitePoint{2, 0}).sup() == 2.0);

    CHECK(run_cli("check " + kFixtures + "/power_line.json").exit_code == 1);
}

TEST_CASE("cli: contraction estimation and certified solves") {
    auto feasible = run_cli("contract " + kFixtures + "/halving_line.json --kind banach");
    CHECK(feasible.exit_code == 0);
    CHECK(feasible.out.find("feasible") != std::string::npos);

    auto infeasible = run_cli("contract " + kFixtures + "/plane_tripling.json --kind banach");
    CHECK(infeasible.exit_code == 1);

    auto tab = run_cli("contract " + kFixtures + "/tabulated_pair.json --kind banach");
    CHECK(tab.exit_code == 0);
    CHECK(tab.out.find("exhaustive") != std::string::npos);

    auto solve = run_cli("solve " + kFixtures +
                         "/halving_line.json --kind banach --x0 1@e1 --tol 1e-10");
    CHECK(solve.exit_code == 0);
    CHECK(solve.out.find("converged") != std::string::npos);

    auto stuck = run_cli("solve " + kFixtures +
                         "/plane_tripling.json --kind banach --x0 1,1@2 --tol 1e-10");
    CHECK(stuck.exit_code == 1);
    CHECK(stuck.out.find("infeasible") != std::string::npos);

    auto capped = run_cli("solve " + kFixtures +
                          "/halving_line.json --kind banach --x0 1@e1 --tol 1e-12 --max-iter 2");
    CHECK(capped.exit_code == 1);
    CHECK(capped.out.find("not converged") != std::string::npos);
}

TEST_CASE("cli: topology queries and separation") {
    std::string tab = kFixtures + "/tabulated_pair.json";
    CHECK(run_cli("topology " + tab + " --set e1:a --query interior --point a@e1").exit_code == 0);
    CHECK(run_cli("topology " + tab + " --set e1:a --query boundary --point a@e1").exit_code == 1);
    CHECK(run_cli("topology " + tab + " --set e1:a --query closure --point b@e1").exit_code == 1);

    std::string line = kFixtures + "/halving_line.json";
    CHECK(run_cli("topology " + line +
                  " --set \"ball(0@e1;2)\" --query interior --point 1@e1")
              .exit_code == 0);
    CHECK(run_cli("topology " + line +
                  " --set \"ball(0@e1;2)\" --query boundary --point 2@e1")
              .exit_code == 0);
    CHECK(run_cli("topology " + line +
                  " --set \"ball(0@e1;2)\" --query interior --point 5@e1")
              .exit_code == 1);

    CHECK(run_cli("separate " + tab + " --f1 e1:a --f2 e2:b").exit_code == 0);
    CHECK(run_cli("separate " + tab + " --f1 e1:a --f2 e1:a").exit_code == 2); // overlap
}

TEST_CASE("cli: machine-readable reports mirror the printed numbers") {
    std::string out_path = temp_path("softfix_report.json");
    auto run = run_cli("contract " + kFixtures + "/halving_line.json --kind banach --json-out " +
                       out_path);
    REQUIRE(run.exit_code == 0);
    auto report = nlohmann::json::parse(slurp(out_path));
    CHECK(report["command"] == "contract");
    CHECK(report["seed"] == 42);
    CHECK(report["report"]["alpha_hat"]["e1"] == 0.5);
    CHECK(report["report"]["feasible"] == true);
    CHECK(report["report"]["witness"]["ratio"] == 0.5);

    // every number surfaced in the human output is present in the report
    CHECK(run.out.find("0.5") != std::string::npos);
}

TEST_CASE("cli: deterministic outputs for fixed descriptor, flags, and seed") {
    std::string args = "contract " + kFixtures + "/plane_tripling.json --kind banach --seed 7";
    auto first = run_cli(args);
    auto second = run_cli(args);
    CHECK(first.exit_code == second.exit_code);
    CHECK(first.out == second.out);
}

TEST_CASE("cli: input errors exit with code 2") {
    CHECK(run_cli("check /nonexistent.json").exit_code == 2);
    CHECK(run_cli("frobnicate x").exit_code == 2);
    CHECK(run_cli("example 9.99").exit_code == 2);
    std::string bad = temp_path("softfix_bad.json");
    std::ofstream(bad) << "{ not json";
    CHECK(run_cli("check " + bad).exit_code == 2);
    CHECK(run_cli("solve " + kFixtures +
                  "/halving_line.json --kind banach --x0 zz@e9 --tol 1e-10")
              .exit_code == 2);
}
