#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "osculate/suites.hpp"
#include "support.hpp"

using namespace osc;
using osc::test::load_fixture;

// ============================================================================
// Suite orchestration (the cmd_verify machinery)
// ============================================================================

TEST_CASE("the group suite passes on the foliation with all brackets zero") {
    Geometry geom = load_fixture("foliation3.geom");
    SuiteOptions opt;
    opt.samples = 20;
    SuiteResult result = run_suite(geom, "group", opt);
    CHECK(result.pass);
    osc::test::check_vec(geom.osculating_bracket({0, 0, 0}, {1, 0}, {0, 1}), {0.0}, 0.0);
}

TEST_CASE("every suite passes on heis3 with the default handles") {
    Geometry geom = load_fixture("heis3.geom");
    SuiteOptions opt;
    opt.samples = 15;
    opt.seed = 7;
    for (const char* suite : {"group", "oracle", "expmap", "groupoid"}) {
        CAPTURE(suite);
        CHECK(run_suite(geom, suite, opt).pass);
    }
}

TEST_CASE("identical seeds reproduce identical reports") {
    Geometry geom = load_fixture("heis3-polarized.geom");
    SuiteOptions opt;
    opt.samples = 10;
    opt.seed = 1234;
    Json a = run_suite(geom, "oracle", opt).checks;
    Json b = run_suite(geom, "oracle", opt).checks;
    CHECK(a.dump() == b.dump());
}

TEST_CASE("the broken handle fails the expmap suite under its advertised check name") {
    Geometry geom = load_fixture("heis3.geom");
    SuiteOptions opt;
    opt.samples = 10;
    opt.handles = {"fs", "broken"};
    SuiteResult result = run_suite(geom, "expmap", opt);
    CHECK_FALSE(result.pass);
    bool found = false;
    for (const Json& check : result.checks)
        if (check["name"] == "h-adapted-defect" && check["handle"] == "broken")
            found = !check["pass"].get<bool>();
    CHECK(found);
}

TEST_CASE("handle factory resolves every advertised name") {
    Geometry geom = load_fixture("heis3.geom");
    std::vector<Vec> samples = {{0, 0, 0}};
    for (const char* name : {"fs", "conn", "autochart", "broken", "table:par"}) {
        CAPTURE(name);
        CHECK_NOTHROW(make_handle(geom, name, samples));
    }
    CHECK_THROWS_AS(make_handle(geom, "nonsense", samples), SchemaError);
    CHECK_THROWS_AS(make_handle(geom, "table:missing", samples), SchemaError);
    // flat breaks H on heis3
    CHECK_THROWS_AS(make_handle(geom, "flat", samples), NotHPreserving);
}

TEST_CASE("unknown suites are configuration errors") {
    Geometry geom = load_fixture("heis3.geom");
    CHECK_THROWS_AS(run_suite(geom, "bogus", SuiteOptions{}), SchemaError);
}

// ============================================================================
// CSV export
// ============================================================================

TEST_CASE("probe grids export as CSV rows") {
    ProbeReport report;
    report.name = "demo";
    report.t_grid = {0.25, 0.125};
    report.residuals = {1e-3, 5e-4};
    std::string path = "osculate-test-probe.csv";
    write_probe_csv(path, report);
    std::ifstream in(path);
    std::string header, row1, row2;
    std::getline(in, header);
    std::getline(in, row1);
    std::getline(in, row2);
    CHECK(header == "t,residual");
    CHECK(row1 == "0.25,0.001");
    CHECK(row2 == "0.125,0.0005");
    in.close();
    std::remove(path.c_str());
}
