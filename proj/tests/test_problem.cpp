#include <doctest.h>

#include <nlohmann/json.hpp>

#include "tsys/commands.hpp"

using namespace tsys;

namespace {

const char* kExampleII = R"json({
  "interval": [0, 1],
  "functions": ["1", "x"],
  "objective": "x^2",
  "moments": [1, 0.5],
  "options": {"grid": 1025, "seed": 7}
})json";

GlobalFlags text_flags() { return GlobalFlags{}; }

}  // namespace

TEST_CASE("parse_spec reads a full document") {
    ProblemSpec spec = parse_spec(kExampleII);
    CHECK(spec.a == 0.0);
    CHECK(spec.b == 1.0);
    REQUIRE(spec.functions.size() == 2);
    CHECK(spec.function_sources[1] == "x");
    CHECK(spec.objective_source == "x^2");
    CHECK(spec.moments == MomentVector{1.0, 0.5});
    CHECK(spec.options.grid == 1025);
    REQUIRE(spec.options.seed.has_value());
    CHECK(*spec.options.seed == 7);
    CHECK(spec.n() == 1);

    FunctionSystem sys = spec.make_system();
    CHECK(sys.size() == 3);
    CHECK(sys.value(2, 0.5) == doctest::Approx(0.25));
}

TEST_CASE("parse_spec failure modes") {
    CHECK_THROWS_AS(parse_spec(""), SpecError);
    CHECK_THROWS_AS(parse_spec("[]"), SpecError);
    CHECK_THROWS_AS(parse_spec(R"json({"interval": [1, 0], "functions": ["1"],
        "objective": "x", "moments": [1]})json"),
                    SpecError);
    // arity mismatch: three functions, two moments
    CHECK_THROWS_AS(parse_spec(R"json({"interval": [0, 1],
        "functions": ["1", "x", "x^2"], "objective": "x^3", "moments": [1, 0.5]})json"),
                    SpecError);
    // expression error carries its location
    try {
        parse_spec(R"json({"interval": [0, 1], "functions": ["foo(x)"],
            "objective": "x", "moments": [1]})json");
        FAIL("expected SpecError");
    } catch (const SpecError& e) {
        CHECK(std::string(e.what()).find("functions[0]") != std::string::npos);
    }
}

TEST_CASE("options: rescale is parsed and applied") {
    ProblemSpec spec = parse_spec(R"json({
        "interval": [1, 2],
        "functions": ["1"],
        "objective": "x",
        "moments": [1],
        "options": {"rescale": "x"}
    })json");
    REQUIRE(spec.options.rescale_h != nullptr);
    FunctionSystem sys = spec.make_system();
    CHECK(sys.value(0, 1.5) == doctest::Approx(1.0 / 1.5));
    CHECK(sys.value(1, 1.5) == doctest::Approx(1.0));
}

TEST_CASE("cmd_bound produces a deterministic report") {
    ProblemSpec spec = parse_spec(kExampleII);
    CommandResult a = cmd_bound(spec, Sense::Max, text_flags());
    CommandResult b = cmd_bound(spec, Sense::Max, text_flags());
    CHECK(a.exit_code == kExitOk);
    CHECK(a.output == b.output);
    CHECK(a.output.find("value: 0.5\n") != std::string::npos);
    CHECK(a.output.find("cone: strictly-positive") != std::string::npos);

    CommandResult mn = cmd_bound(spec, Sense::Min, text_flags());
    CHECK(mn.output.find("value: 0.25\n") != std::string::npos);
}

TEST_CASE("cmd_bound JSON report round-trips") {
    ProblemSpec spec = parse_spec(kExampleII);
    GlobalFlags flags;
    flags.json = true;
    CommandResult res = cmd_bound(spec, Sense::Max, flags);
    CHECK(res.exit_code == kExitOk);
    nlohmann::json j = nlohmann::json::parse(res.output);
    CHECK(j["command"] == "bound");
    CHECK(j["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(j["atoms"].size() == 2);
    CHECK(j["exit"] == 0);
}

TEST_CASE("cmd_bound exit codes") {
    // infeasible moments
    ProblemSpec spec = parse_spec(R"json({"interval": [0, 1], "functions": ["1", "x"],
        "objective": "x^2", "moments": [1, 2], "options": {"grid": 257}})json");
    CHECK(cmd_bound(spec, Sense::Max, text_flags()).exit_code == kExitInfeasible);

    // refuted hypothesis without override
    ProblemSpec bad = parse_spec(R"json({"interval": [0, 1], "functions": ["1", "x"],
        "objective": "-x^2", "moments": [1, 0.5], "options": {"grid": 257}})json");
    CHECK(cmd_bound(bad, Sense::Max, text_flags()).exit_code == kExitRefuted);
    GlobalFlags force;
    force.override_hypothesis = true;
    CHECK(cmd_bound(bad, Sense::Max, force).exit_code == kExitOk);
}

TEST_CASE("cmd_verify ladder") {
    // monomials to degree 4: everything verifies
    ProblemSpec good = parse_spec(R"json({"interval": [0, 1],
        "functions": ["1", "x", "x^2", "x^3"], "objective": "x^4",
        "moments": [1, 0.5, 0.3333333333333333, 0.25]})json");
    CommandResult res = cmd_verify(good, text_flags());
    CHECK(res.exit_code == kExitOk);
    CHECK(res.output.find("signs: +1 +1 +1 +1 +1\n") != std::string::npos);
    CHECK(res.output.find("wronskian: verified+") != std::string::npos);
    CHECK(res.output.find("certificate: margin") != std::string::npos);

    // determinant vanishes for symmetric nodes: refuted with a witness
    ProblemSpec refuted = parse_spec(R"json({"interval": [-1, 1],
        "functions": ["1", "x", "x^3"], "objective": "x^4", "moments": [1, 0, 0.5]})json");
    res = cmd_verify(refuted, text_flags());
    CHECK(res.exit_code == kExitRefuted);
    CHECK(res.output.find("witness") != std::string::npos);

    // ladder fine but an interior Wronskian vanishes: inconclusive
    ProblemSpec vanishing = parse_spec(R"json({"interval": [-1, 1],
        "functions": ["1", "x"], "objective": "x^4", "moments": [1, 0]})json");
    res = cmd_verify(vanishing, text_flags());
    CHECK(res.exit_code == kExitInconclusive);
}

TEST_CASE("cmd_verify reports sign normalization") {
    ProblemSpec flipped = parse_spec(R"json({"interval": [0, 1],
        "functions": ["1", "-x"], "objective": "x^2", "moments": [1, -0.5]})json");
    CommandResult res = cmd_verify(flipped, text_flags());
    CHECK(res.exit_code == kExitOk);
    CHECK(res.output.find("signs: +1 -1") != std::string::npos);
}

TEST_CASE("cmd_oracle ladder report") {
    ProblemSpec spec = parse_spec(kExampleII);
    CommandResult res = cmd_oracle(spec, Sense::Max, {257, 1025}, text_flags());
    CHECK(res.exit_code == kExitOk);
    CHECK(res.output.find("grid=257 value=0.5") != std::string::npos);
    CHECK(res.output.find("grid=1025 value=0.5") != std::string::npos);
    CHECK(res.output.find("support bound <= 2: ok") != std::string::npos);

    GlobalFlags flags;
    flags.json = true;
    res = cmd_oracle(spec, Sense::Max, {257}, flags);
    nlohmann::json j = nlohmann::json::parse(res.output);
    CHECK(j["rows"].size() == 1);
    CHECK(j["rows"][0]["grid"] == 257);
    CHECK(j["rows"][0]["atoms"].size() <= 2);
}

TEST_CASE("cmd_compare") {
    ProblemSpec spec = parse_spec(kExampleII);
    CommandResult res = cmd_compare(spec, "x^2", text_flags());
    CHECK(res.exit_code == kExitOk);
    CHECK(res.output.find("support distance: 0\n") != std::string::npos);

    res = cmd_compare(spec, "x^3", text_flags());
    CHECK(res.exit_code == kExitOk);

    res = cmd_compare(spec, "-x^2", text_flags());
    CHECK(res.exit_code == kExitRefuted);
}
