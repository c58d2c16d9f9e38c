#include "selinf/fixtures.hpp"
#include "selinf/json_io.hpp"
#include "selinf/rational.hpp"

#include "doctest.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

using namespace selinf;
using json_io::Json;

TEST_CASE("system serialization round-trips") {
    for (const char* name : {"example8", "example9t", "example10", "example12", "example12rho",
                             "tetrahedron", "independent"}) {
        SelectiveSystem sys = fixtures::fixture_by_name(name);
        Json doc = json_io::serialize_system(sys);
        json_io::ParsedDocument parsed = json_io::parse_system(doc);
        CHECK(parsed.system == sys);
        CHECK_FALSE(parsed.had_diagram);
        CHECK(parsed.format_version == "1");
        CHECK(json_io::serialize_system(parsed.system) == doc);
    }
}

TEST_CASE("probability strings are authoritative and kept verbatim") {
    Json doc = Json::parse(R"({
        "factors": [{"name": "alpha", "levels": ["1", "2"]}],
        "variables": [{"name": "A", "outcomes": ["1", "2"]}],
        "treatments": [{"alpha": "1"}, {"alpha": "2"}],
        "distributions": [
            {"treatment": {"alpha": "1"},
             "pmf": [{"outcomes": ["1"], "p": "0.250"}, {"outcomes": ["2"], "p": "0.750"}]},
            {"treatment": {"alpha": "2"},
             "pmf": [{"outcomes": ["1"], "p": "1/3"}, {"outcomes": ["2"], "p": "2/3"}]}
        ]
    })");
    json_io::ParsedDocument parsed = json_io::parse_system(doc);

    Treatment t1{{"alpha", "1"}}, t2{{"alpha", "2"}};
    const Prob& quarter = parsed.system.distributions.at(t1).table.at({"1"});
    CHECK(quarter.value == 0.25);
    REQUIRE(quarter.exact.has_value());
    CHECK(*quarter.exact == Rational(1, 4));
    REQUIRE(quarter.text.has_value());
    CHECK(*quarter.text == "0.250");

    const Prob& third = parsed.system.distributions.at(t2).table.at({"1"});
    CHECK(third.value == doctest::Approx(1.0 / 3.0));
    REQUIRE(third.exact.has_value());
    CHECK(*third.exact == Rational(1, 3));

    Json out = json_io::serialize_system(parsed.system);
    CHECK(out["distributions"][0]["pmf"][0]["p"] == "0.250");
    CHECK(out["distributions"][0]["pmf"][1]["p"] == "0.750");
    CHECK(out["distributions"][1]["pmf"][0]["p"] == "1/3");
    CHECK(out["distributions"][1]["pmf"][1]["p"] == "2/3");
}

namespace {

Json crossed_two_factor_doc() {
    Json doc = Json::parse(R"({
        "factors": [{"name": "alpha", "levels": ["1", "2"]},
                    {"name": "beta", "levels": ["1", "2"]}],
        "variables": [
            {"name": "A", "outcomes": ["1", "2"], "influences": ["alpha"]},
            {"name": "B", "outcomes": ["1", "2"], "influences": ["alpha", "beta"]}],
        "treatments": [],
        "distributions": []
    })");
    for (const char* a : {"1", "2"})
        for (const char* b : {"1", "2"}) {
            Json t{{"alpha", a}, {"beta", b}};
            doc["treatments"].push_back(t);
            Json cells = Json::array();
            for (const char* oa : {"1", "2"})
                for (const char* ob : {"1", "2"})
                    cells.push_back({{"outcomes", {oa, ob}}, {"p", 0.25}});
            doc["distributions"].push_back({{"treatment", t}, {"pmf", cells}});
        }
    return doc;
}

}  // namespace

TEST_CASE("influence diagrams trigger canonical rearrangement") {
    json_io::ParsedDocument parsed = json_io::parse_system(crossed_two_factor_doc());
    CHECK(parsed.had_diagram);
    CHECK(parsed.diagram.at("A") == std::set<std::string>{"alpha"});
    CHECK(parsed.diagram.at("B") == (std::set<std::string>{"alpha", "beta"}));

    REQUIRE(parsed.system.factors.size() == 2);
    CHECK(parsed.system.factors[0].name == "A*");
    CHECK(parsed.system.factors[0].levels == (std::vector<std::string>{"alpha=1", "alpha=2"}));
    CHECK(parsed.system.factors[1].name == "B*");
    CHECK(parsed.system.factors[1].levels ==
          (std::vector<std::string>{"alpha=1;beta=1", "alpha=1;beta=2", "alpha=2;beta=1",
                                    "alpha=2;beta=2"}));
    CHECK(parsed.system.treatments.size() == 4);
    CHECK_NOTHROW(require_valid(parsed.system));

    SUBCASE("empty influence lists map to the empty-point label") {
        Json doc = crossed_two_factor_doc();
        doc["variables"][0]["influences"] = Json::array();
        json_io::ParsedDocument flat = json_io::parse_system(doc);
        CHECK(flat.system.factors[0].levels == std::vector<std::string>{"∅"});
    }

    SUBCASE("collapsing treatments must agree") {
        Json doc = crossed_two_factor_doc();
        doc["variables"][0]["influences"] = Json::array();
        doc["variables"][1]["influences"] = {"beta"};
        doc["distributions"][0]["pmf"][0]["p"] = 0.5;
        doc["distributions"][0]["pmf"][1]["p"] = 0.0;
        CHECK_THROWS_WITH_AS(json_io::parse_system(doc), doctest::Contains("collapsing"),
                             std::invalid_argument);
    }

    SUBCASE("partial influence declarations are rejected") {
        Json doc = crossed_two_factor_doc();
        doc["variables"][1].erase("influences");
        CHECK_THROWS_WITH_AS(json_io::parse_system(doc),
                             doctest::Contains("either every variable or none"),
                             std::invalid_argument);
    }
}

TEST_CASE("parse errors carry locations") {
    CHECK_THROWS_WITH_AS(json_io::parse_system(Json::parse("[]")), doctest::Contains("top level"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        json_io::parse_system(Json::parse(R"({"variables": [], "treatments": [], "distributions": []})")),
        doctest::Contains("missing \"factors\""), std::invalid_argument);

    Json doc = json_io::serialize_system(fixtures::example10());
    Json bad = doc;
    bad["distributions"][0]["pmf"][0]["p"] = true;
    CHECK_THROWS_WITH_AS(json_io::parse_system(bad), doctest::Contains("probability"),
                         std::invalid_argument);

    bad = doc;
    bad["distributions"][0]["pmf"][0]["p"] = "one quarter";
    CHECK_THROWS_AS(json_io::parse_system(bad), std::invalid_argument);

    bad = doc;
    bad["distributions"].push_back(bad["distributions"][0]);
    CHECK_THROWS_WITH_AS(json_io::parse_system(bad), doctest::Contains("duplicate distribution"),
                         std::invalid_argument);

    bad = doc;
    bad["distributions"][0]["pmf"].push_back(bad["distributions"][0]["pmf"][0]);
    CHECK_THROWS_WITH_AS(json_io::parse_system(bad), doctest::Contains("duplicate outcome"),
                         std::invalid_argument);

    bad = doc;
    bad["treatments"][0]["alpha"] = 7;
    CHECK_THROWS_AS(json_io::parse_system(bad), std::invalid_argument);
}

TEST_CASE("metric parsing and serialization") {
    CHECK(json_io::parse_metric(Json("minkowski1")).kind == metrics::Kind::Minkowski);
    CHECK(json_io::parse_metric(Json("minkowski1")).p == 1.0);
    CHECK(json_io::parse_metric(Json("minkowski2")).p == 2.0);
    CHECK(json_io::parse_metric(Json("cond_entropy")).kind == metrics::Kind::CondEntropy);
    CHECK(json_io::parse_metric(Json("norm_cond_entropy")).kind == metrics::Kind::NormCondEntropy);
    CHECK_THROWS_WITH_AS(json_io::parse_metric(Json("euclid")), doctest::Contains("shorthand"),
                         std::invalid_argument);

    CHECK(std::isinf(json_io::parse_metric(Json::parse(R"({"kind": "minkowski", "p": "inf"})")).p));
    CHECK_THROWS_AS(json_io::parse_metric(Json::parse(R"({"kind": "minkowski", "p": 0.5})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(json_io::parse_metric(Json::parse(R"({"kind": "waffle"})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        json_io::parse_metric(Json::parse(R"({"kind": "sum", "inner": [{"kind": "minkowski", "p": 1}]})")),
        std::invalid_argument);
    CHECK_NOTHROW(
        json_io::parse_metric(Json::parse(R"({"kind": "separation", "v_pmf": [[0.0, 0.5], [1.0, 0.5]]})")));
    CHECK_THROWS_AS(
        json_io::parse_metric(Json::parse(R"({"kind": "separation", "v_pmf": [[0.0]]})")),
        std::invalid_argument);

    metrics::MetricSpec nested = metrics::MetricSpec::mixture(
        {0.25, 0.75},
        {metrics::MetricSpec::classification({"1"}, {{"alpha=1", {"2"}}}),
         metrics::MetricSpec::power(0.5, metrics::MetricSpec::minkowski(2.0))});
    Json j = json_io::serialize_metric(nested);
    CHECK(json_io::serialize_metric(json_io::parse_metric(j)) == j);

    metrics::MetricSpec combos = metrics::MetricSpec::max(
        metrics::MetricSpec::flip(metrics::MetricSpec::classification({"2"})),
        metrics::MetricSpec::bounded(metrics::MetricSpec::minkowski(
            std::numeric_limits<double>::infinity())));
    Json k = json_io::serialize_metric(combos);
    CHECK(json_io::serialize_metric(json_io::parse_metric(k)) == k);
}

TEST_CASE("partition round-trip") {
    SelectiveSystem tetra = fixtures::tetrahedron();
    diversity::Partition part = diversity::identity_partition(tetra);
    part.allow_empty_classes = true;
    Json j = json_io::serialize_partition(part);
    diversity::Partition back = json_io::parse_partition(j);
    CHECK(back.s == part.s);
    CHECK(back.allow_empty_classes);
    CHECK(back.classes == part.classes);

    CHECK_THROWS_WITH_AS(json_io::parse_partition(Json::parse(R"({"classes": {}})")),
                         doctest::Contains("missing \"s\""), std::invalid_argument);
    CHECK_THROWS_AS(
        json_io::parse_partition(Json::parse(R"({"s": 3, "classes": {"alpha=1": {"1": "x"}}})")),
        std::invalid_argument);
}

TEST_CASE("verdicts and reports serialize") {
    Json fj = json_io::lft_verdict_to_json(lft::lft(fixtures::example10()), true);
    CHECK(fj["status"] == "feasible");
    CHECK(fj.contains("witness"));
    CHECK(fj.contains("max_residual"));

    Json nj = json_io::lft_verdict_to_json(lft::lft(fixtures::example11()), true);
    CHECK(nj["status"] == "infeasible");
    CHECK_FALSE(nj.contains("witness"));

    Json mj = json_io::ms_report_to_json(check_marginal_selectivity(fixtures::example8()));
    CHECK(mj["satisfied"] == false);
    CHECK(mj["violations"].size() > 0);
    CHECK(mj["violations"][0].contains("discrepancy"));
}

TEST_CASE("file loading") {
    CHECK_THROWS_WITH_AS(json_io::load_system_file("/nonexistent/selinf.json"),
                         doctest::Contains("cannot open"), std::invalid_argument);

    const std::string bad_path = "/tmp/selinf_test_bad.json";
    std::ofstream(bad_path) << "{nope";
    CHECK_THROWS_AS(json_io::load_system_file(bad_path), std::invalid_argument);

    const std::string good_path = "/tmp/selinf_test_good.json";
    std::ofstream(good_path) << json_io::serialize_system(fixtures::example10()).dump(2);
    json_io::ParsedDocument parsed = json_io::load_system_file(good_path);
    CHECK(parsed.system == fixtures::example10());
}
