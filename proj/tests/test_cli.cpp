#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

using json = nlohmann::json;
using testutil::run_cli;

namespace {

std::string golden_dir() {
#ifdef AUTF_GOLDEN_DIR
    return AUTF_GOLDEN_DIR;
#else
    return "tests/golden";
#endif
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing golden file: " << path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

TEST_CASE("golden outputs are byte-stable under the default seed") {
    struct Case {
        const char* name;
        const char* args;
    };
    std::vector<Case> cases = {
        {"symmetries_z3.json", "symmetries --f \"z^3\""},
        {"symmetries_refuted.json",
         "symmetries --f \"z^4+z^2\" --at \"0.7071067811865476i\""},
        {"verify_cos_halfturn.json",
         "verify --f \"cos(z)\" --map \"1/1\" --b \"6.283185307179586\""},
        {"roots_cos.json", "roots --f \"cos(z)\" --box \"-7,-1,7,1\" --grid 40"},
        {"orbit_exp.json",
         "orbit --f \"exp(z)\" --at \"0\" --map \"0/1\" --b "
         "\"6.283185307179586i\" --depth 3"},
    };
    for (const auto& c : cases) {
        CAPTURE(c.name);
        auto run = run_cli(c.args);
        CHECK(run.exit_code == 0);
        CHECK(run.output == read_file(golden_dir() + "/" + c.name));
    }
}

TEST_CASE("identical invocations produce identical bytes") {
    const char* args =
        "symmetries --f \"z^4+z^2\" --seed 7 --samples 16";
    auto first = run_cli(args);
    auto second = run_cli(args);
    CHECK(first.exit_code == 0);
    CHECK(first.output == second.output);
}

TEST_CASE("exit codes follow the contract") {
    // 0: ran successfully, even with no symmetry found.
    auto none = run_cli(
        "symmetries --f \"z^4+z^2\" --at \"0.7071067811865476i\"");
    CHECK(none.exit_code == 0);
    json d = json::parse(none.output);
    CHECK(d["message"] ==
          "no entire automorphic function related to this point");
    CHECK(d["verified"].empty());

    // 1: usage errors.
    CHECK(run_cli("symmetries 2>/dev/null").exit_code == 1);
    CHECK(run_cli("symmetries --f \"1/z\"").exit_code == 1);
    CHECK(run_cli("symmetries --f \"z +\"").exit_code == 1);
    CHECK(run_cli("symmetries --f \"cos(z)\"").exit_code == 1); // no box

    // 2: numeric failures.
    CHECK(run_cli("symmetries --f \"3\" --at \"0\"").exit_code == 2);
    CHECK(run_cli("symmetries --f \"z^2\" --at \"1\"").exit_code == 2);
}

TEST_CASE("reports have the stable field set") {
    auto run = run_cli("verify --f \"z^2\" --map \"1/1\"");
    REQUIRE(run.exit_code == 0);
    json d = json::parse(run.output);
    for (const char* key :
         {"command", "function", "policy", "report"})
        CHECK(d.contains(key));
    const json& r = d["report"];
    for (const char* key :
         {"status", "map", "exact_tier", "compare_order", "samples", "seed",
          "max_residual", "witness", "witness_residual"})
        CHECK(r.contains(key));
    CHECK(r["status"] == "VerifiedExact");
    CHECK(r["map"]["theta"] == "1/1");
    CHECK(r["map"]["b"].contains("re"));
    CHECK(r["map"]["b"].contains("im"));
}

TEST_CASE("angles serialize as exact rational strings") {
    auto run = run_cli("symmetries --f \"z^3\"");
    REQUIRE(run.exit_code == 0);
    json d = json::parse(run.output);
    std::vector<std::string> thetas;
    for (const auto& v : d["verified"])
        thetas.push_back(v["theta"].get<std::string>());
    CHECK(thetas == std::vector<std::string>{"2/3", "4/3"});
    for (const auto& e : d["closure"]["elements"])
        CHECK(e["theta"].get<std::string>().find('/') != std::string::npos);
}

TEST_CASE("error reports are serialized alongside the exit code") {
    auto run = run_cli("symmetries --f \"log(z)\"");
    CHECK(run.exit_code == 1);
    json d = json::parse(run.output);
    CHECK(d["error"]["type"] == "NotEntireError");
}

TEST_CASE("text mode renders without disturbing determinism") {
    auto a = run_cli("verify --f \"z^2\" --map \"1/1\" --text");
    auto b = run_cli("verify --f \"z^2\" --map \"1/1\" --text");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.find("VerifiedExact") != std::string::npos);
}
