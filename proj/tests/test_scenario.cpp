#include "wr/scenario.hpp"
#include "wr/verify.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>

using namespace wr;
namespace fs = std::filesystem;

namespace {

std::string scenario_path(const std::string& name) { return std::string(WR_SCENARIO_DIR) + "/" + name; }

std::string fresh_out_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("wr_test_" + tag);
    fs::remove_all(p);
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("schema violations exit with code 2") {
    const std::string out = fresh_out_dir("schema");
    {
        const ScenarioResult r = run_scenario_file("/nonexistent/file.json", out);
        CHECK(r.exit_code == kExitSchemaError);
    }
    {
        nlohmann::json doc;
        doc["name"] = "missing_kind";
        doc["params"] = nlohmann::json::object();
        CHECK(run_scenario_json(doc, out).exit_code == kExitSchemaError);
    }
    {
        nlohmann::json doc;
        doc["name"] = "bad_kind";
        doc["kind"] = "frobnicate";
        doc["params"] = nlohmann::json::object();
        CHECK(run_scenario_json(doc, out).exit_code == kExitSchemaError);
    }
    {
        // malformed JSON file
        const std::string bad = out + "/bad.json";
        write_text_file(bad, "{ not json ]");
        CHECK(run_scenario_file(bad, out).exit_code == kExitSchemaError);
    }
    {
        // expression outside the whitelist
        nlohmann::json doc;
        doc["name"] = "bad_expr";
        doc["kind"] = "isocurved_pair";
        doc["params"] = {{"v1", "system(t)"}, {"C2", 1.0}, {"window", {-2.0, 2.0}}};
        const ScenarioResult r = run_scenario_json(doc, out);
        CHECK(r.exit_code != kExitPass);
    }
}

TEST_CASE("shipped scenarios run clean") {
    for (const std::string name :
         {"obata_sphere.json", "erf_pair.json", "hyperbolic_pair.json", "erf_theoremc.json",
          "liealg_sphere.json", "cosh_family_curvature.json", "one_d_table.json",
          "einstein_pair.json"}) {
        const std::string out = fresh_out_dir("run_" + name.substr(0, name.size() - 5));
        const ScenarioResult r = run_scenario_file(scenario_path(name), out);
        INFO(name, ": ", r.error);
        CHECK(r.exit_code == kExitPass);
        CHECK(r.pass);
        CHECK(fs::exists(out + "/report.json"));
        // the report is valid JSON with the contract fields even on success
        nlohmann::json rep;
        std::ifstream in(out + "/report.json");
        in >> rep;
        CHECK(rep["name"] == r.name);
        CHECK(rep.contains("checks"));
    }
}

TEST_CASE("failed assertions exit with code 1 and name the check") {
    nlohmann::json doc;
    doc["name"] = "too_tight";
    doc["kind"] = "isocurved_pair";
    doc["params"] = {{"v1", "exp(t^2/2)"}, {"C2", 1.0}, {"window", {-2.0, 2.0}}, {"tail_bound", 0.0042}};
    doc["tolerances"] = {{"wronskian_spread", 1e-18}};
    const std::string out = fresh_out_dir("fail");
    const ScenarioResult r = run_scenario_json(doc, out);
    CHECK(r.exit_code == kExitAssertionFailed);
    CHECK(r.error.find("wronskian_spread") != std::string::npos);
    CHECK(fs::exists(out + "/report.json"));
}

TEST_CASE("CSV artifacts are deterministic byte for byte") {
    const std::string out1 = fresh_out_dir("det1");
    const std::string out2 = fresh_out_dir("det2");
    REQUIRE(run_scenario_file(scenario_path("erf_pair.json"), out1).exit_code == 0);
    REQUIRE(run_scenario_file(scenario_path("erf_pair.json"), out2).exit_code == 0);
    CHECK(slurp(out1 + "/isocurved_pair.csv") == slurp(out2 + "/isocurved_pair.csv"));
    const std::string csv = slurp(out1 + "/isocurved_pair.csv");
    CHECK(csv.rfind("t,tau,v1,v2,wronskian\n", 0) == 0);
    CHECK(csv.find("\r") == std::string::npos); // LF endings
}

TEST_CASE("table_1d rows match the closed-form classification") {
    const auto rows = table_1d({{"circle", {1.0, 1.0}},
                                {"circle", {1.0, 1.5}},
                                {"circle", {1.0, 2.0}},
                                {"half_line", {-1.0, 3.0}},
                                {"interval", {0.0, 1.0}}});
    CHECK(rows[0].dim == 2);
    CHECK(rows[1].dim == 0);
    CHECK(rows[2].dim == 2);
    CHECK(rows[3].dim_D == 1);
    CHECK(rows[3].dim_N == 1);
    CHECK(rows[4].dim_D == 0);
    CHECK(rows[4].dim_N == 1);
    const std::string csv = table_1d_csv(rows);
    CHECK(csv.rfind("domain,tau,a,dim,dim_D,dim_N\n", 0) == 0);
}

TEST_CASE("acceptance: filter selects criteria; a brutal tolerance makes them fail") {
    const auto only_c1 = run_acceptance("c1");
    REQUIRE(only_c1.size() == 1);
    CHECK(only_c1[0].pass);

    const auto tight = run_acceptance("c7", 1e-18);
    REQUIRE(tight.size() == 1);
    CHECK_FALSE(tight[0].pass); // sensitivity reporting: thresholds now unreachable
}
