#include <doctest.h>

#include <cmath>

#include "osculate/expmaps.hpp"
#include "osculate/rng.hpp"
#include "support.hpp"

using namespace osc;
using osc::test::el;
using osc::test::load_fixture;

namespace {

std::vector<GroupElement> random_arrows(const Geometry& geom, int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<GroupElement> arrows;
    for (int i = 0; i < count; ++i)
        arrows.push_back({rng.uniform_vec(geom.hdim(), -0.6, 0.6),
                          rng.uniform_vec(geom.qdim(), -0.6, 0.6)});
    return arrows;
}

}  // namespace

// ============================================================================
// H-preservation of connections
// ============================================================================

TEST_CASE("the flat connection does not preserve H on heis3") {
    Geometry geom = load_fixture("heis3.geom");
    HPreservation r = connection_preserves_h(geom, Connection::zero(geom), {{0, 0, 0}});
    CHECK_FALSE(r.ok);
    // (nabla_{d/dy} X1)^N = -1/2 at the origin
    CHECK(r.worst_residual == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("the flat connection preserves a constant frame") {
    Geometry geom = load_fixture("foliation3.geom");
    HPreservation r =
        connection_preserves_h(geom, Connection::zero(geom), {{0, 0, 0}, {1, -2, 0.5}});
    CHECK(r.ok);
    CHECK(r.worst_residual <= 1e-14);
}

TEST_CASE("the frame-parallel connection preserves H everywhere") {
    for (const char* name : {"heis3.geom", "curved3.geom", "quartic4.geom"}) {
        CAPTURE(name);
        Geometry geom = load_fixture(name);
        Rng rng(3);
        std::vector<Vec> samples = {Vec(std::size_t(geom.dim()), 0.0)};
        for (int i = 0; i < 4; ++i) samples.push_back(rng.uniform_vec(geom.dim(), -0.5, 0.5));
        HPreservation r =
            connection_preserves_h(geom, Connection::frame_parallel(geom), samples);
        CHECK(r.ok);
    }
}

TEST_CASE("the hand-written table connection matches the frame-parallel one") {
    Geometry geom = load_fixture("heis3.geom");
    Connection table =
        Connection::from_entries(geom, geom.spec().connections.at("par"), "par");
    Connection parallel = Connection::frame_parallel(geom);
    Rng rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        Vec at = rng.uniform_vec(3, -1.0, 1.0);
        std::vector<double> a = table.christoffel(at);
        std::vector<double> b = parallel.christoffel(at);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }
}

// ============================================================================
// Handle construction and evaluation
// ============================================================================

TEST_CASE("flat geodesics on the foliation are straight lines") {
    Geometry geom = load_fixture("foliation3.geom");
    ExpMapHandle h = exp_from_connection(geom, Connection::zero(geom), {{0, 0, 0}});
    Vec end = h.evaluate({0.1, 0.2, 0.3}, el({0.4, -0.2}, {0.5}));
    osc::test::check_vec(end, {0.5, 0.0, 0.8}, 1e-12);
}

TEST_CASE("frame-parallel geodesics through frame directions are frame flows") {
    Geometry geom = load_fixture("heis3.geom");
    ExpMapHandle h =
        exp_from_connection(geom, Connection::frame_parallel(geom), {{0, 0, 0}});
    osc::test::check_vec(h.evaluate({0, 0, 0}, el({1, 0}, {0})), {1.0, 0.0, 0.0}, 1e-10);
}

TEST_CASE("connections that break H are refused") {
    Geometry geom = load_fixture("heis3.geom");
    CHECK_THROWS_AS(exp_from_connection(geom, Connection::zero(geom), {{0, 0, 0}}),
                    NotHPreserving);
}

TEST_CASE("runaway geodesics are reported as blowups") {
    Geometry geom = load_fixture("foliation3.geom");
    // Gamma^3_{33} = -1000 never touches the H-fields, but the geodesic
    // equation u' = 1000 u^2 in the normal direction escapes before time 1
    std::vector<ChristoffelEntry> entries = {
        {2, 2, 2, parse_expr("-1000", geom.spec().vars)}};
    ExpMapHandle h = exp_from_connection(
        geom, Connection::from_entries(geom, entries, "runaway"), {{0, 0, 0}});
    CHECK_THROWS_AS(h.evaluate({0, 0, 0}, el({0, 0}, {0.5})), GeodesicBlowup);
}

TEST_CASE("every handle fixes the base point at the zero arrow") {
    Geometry geom = load_fixture("curved3.geom");
    Vec m = {0.2, -0.1, 0.3};
    GroupElement zero = el({0, 0}, {0});
    std::vector<ExpMapHandle> handles = {
        exp_folland_stein(geom),
        exp_from_connection(geom, Connection::frame_parallel(geom), {m}),
        exp_from_chart_family(geom, ChartFamilyKind::FrameAffine, {m}),
        make_broken_shear(geom)};
    for (const ExpMapHandle& h : handles) {
        CAPTURE(h.label());
        osc::test::check_vec(h.evaluate(m, zero), m, 1e-13);
    }
}

TEST_CASE("Folland-Stein endpoints on closed-form flows") {
    Geometry heis = load_fixture("heis3.geom");
    ExpMapHandle fs = exp_folland_stein(heis);
    osc::test::check_vec(fs.evaluate({0, 0, 0}, el({1, 0}, {0})), {1, 0, 0}, 1e-12);
    osc::test::check_vec(fs.evaluate({0, 0, 0}, el({0, 0}, {1})), {0, 0, 1}, 1e-12);

    Geometry pol = load_fixture("heis3-polarized.geom");
    ExpMapHandle fs_pol = exp_folland_stein(pol);
    // the arrow with logarithm ((1,1)|0) is exp(1,1|0) = ((1,1)|1/2)
    GroupElement arrow = gb_exp(pol.osculating_b({0, 0, 0}), el({1, 1}, {0}));
    osc::test::check_vec(fs_pol.evaluate({0, 0, 0}, arrow), {1.0, 1.0, 0.5}, 1e-10);
}

TEST_CASE("chart families validate their members") {
    Geometry geom = load_fixture("heis3.geom");
    // the translation family is fine at the origin only
    ExpMapHandle at_origin =
        exp_from_chart_family(geom, ChartFamilyKind::Translation, {{0, 0, 0}});
    osc::test::check_vec(at_origin.evaluate({0, 0, 0}, el({1, 0}, {0})), {1, 0, 0}, 1e-14);
    CHECK_THROWS_AS(
        exp_from_chart_family(geom, ChartFamilyKind::Translation, {{0, 0, 0}, {0, 1, 0}}),
        InvalidHChartFamily);
}

TEST_CASE("arrows outside the domain box are rejected") {
    Geometry geom = load_fixture("heis3.geom");
    ExpMapHandle fs = exp_folland_stein(geom);
    CHECK_THROWS_AS(fs.evaluate({0, 0, 0}, el({1.5, 0}, {0})), ArrowOutOfDomain);
}

TEST_CASE("the broken shear map displaces the normal part by h1^2") {
    Geometry geom = load_fixture("heis3.geom");
    ExpMapHandle broken = make_broken_shear(geom);
    osc::test::check_vec(broken.evaluate({0, 0, 0}, el({1, 0}, {0})), {1, 0, 1}, 1e-14);
    osc::test::check_vec(broken.evaluate({0, 0, 0}, el({0, 1}, {0.25})), {0, 1, 0.25}, 1e-14);
}

// ============================================================================
// The H-adapted verifier
// ============================================================================

TEST_CASE("constructed handles pass the verifier on every bundled geometry") {
    for (const char* name :
         {"heis3.geom", "heis3-polarized.geom", "foliation3.geom", "curved3.geom",
          "quartic4.geom"}) {
        CAPTURE(name);
        Geometry geom = load_fixture(name);
        Vec origin(std::size_t(geom.dim()), 0.0);
        std::vector<GroupElement> arrows = random_arrows(geom, 12, 11);

        std::vector<ExpMapHandle> handles = {
            exp_folland_stein(geom),
            exp_from_connection(geom, Connection::frame_parallel(geom), {origin}),
            exp_from_chart_family(geom, ChartFamilyKind::FrameAffine, {origin})};
        for (const ExpMapHandle& h : handles) {
            CAPTURE(h.label());
            VerifyReport report = verify_h_adapted(h, origin, arrows);
            CAPTURE(report.worst_defect);
            CHECK(report.pass);
        }
    }
}

TEST_CASE("the shear defect is caught with size one at v = (e1|0)") {
    Geometry geom = load_fixture("heis3.geom");
    ExpMapHandle broken = make_broken_shear(geom);
    VerifyReport report = verify_h_adapted(broken, {0, 0, 0}, {el({1, 0}, {0})});
    CHECK_FALSE(report.pass);
    CHECK(report.worst_defect == doctest::Approx(1.0).epsilon(1e-6));
    // it still satisfies the first-order exponential-map contract
    CHECK(report.defects[0].first_order_defect <= 1e-7);
}

TEST_CASE("the verifier reports zero defect at the zero arrow") {
    Geometry geom = load_fixture("heis3.geom");
    VerifyReport report =
        verify_h_adapted(make_broken_shear(geom), {0, 0, 0}, {el({0, 0}, {0})});
    CHECK(report.pass);
    CHECK(report.worst_defect <= 1e-10);
}

TEST_CASE("fs and the frame-parallel handle agree on H-directions") {
    Geometry geom = load_fixture("curved3.geom");
    Vec m = {0.1, 0.2, -0.1};
    ExpMapHandle fs = exp_folland_stein(geom);
    ExpMapHandle conn = exp_from_connection(geom, Connection::frame_parallel(geom), {m});
    BilinearMap b = geom.osculating_b(m);
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        GroupElement arrow = gb_exp(b, el(rng.uniform_vec(2, -0.6, 0.6), {0.0}));
        CHECK(norm_inf(sub(fs.evaluate(m, arrow), conn.evaluate(m, arrow))) <= 1e-8);
    }
}

TEST_CASE("the table connection handle is H-adapted on heis3") {
    Geometry geom = load_fixture("heis3.geom");
    ExpMapHandle h = exp_from_connection(
        geom, Connection::from_entries(geom, geom.spec().connections.at("par"), "par"),
        {{0, 0, 0}});
    VerifyReport report = verify_h_adapted(h, {0, 0, 0}, random_arrows(geom, 10, 17));
    CHECK(report.pass);
}
