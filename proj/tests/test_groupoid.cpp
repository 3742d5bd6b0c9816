#include <doctest.h>

#include <cmath>

#include "osculate/groupoid.hpp"
#include "osculate/rng.hpp"
#include "support.hpp"

using namespace osc;
using osc::test::el;
using osc::test::load_fixture;

namespace {

std::vector<ExprPtr> curve(const std::vector<std::string>& comps) {
    std::vector<ExprPtr> out;
    for (const std::string& c : comps) out.push_back(parse_expr(c, {"t"}));
    return out;
}

}  // namespace

// ============================================================================
// Glueing charts
// ============================================================================

TEST_CASE("chart_psi at t = 1/2 flows halfway along X1") {
    Geometry geom = load_fixture("heis3.geom");
    ExpMapHandle fs = exp_folland_stein(geom);
    GroupoidElement g = chart_psi(fs, {0, 0, 0}, el({1, 0}, {0}), 0.5);
    const auto& pair = std::get<GroupoidPair>(g);
    osc::test::check_vec(pair.a, {0.5, 0.0, 0.0}, 1e-12);
    osc::test::check_vec(pair.b, {0.0, 0.0, 0.0}, 0.0);
    CHECK(pair.t == 0.5);
}

TEST_CASE("chart_psi at t = 0 lands on the boundary") {
    Geometry geom = load_fixture("heis3.geom");
    ExpMapHandle fs = exp_folland_stein(geom);
    GroupoidElement g = chart_psi(fs, {0, 0, 0}, el({1, 0}, {0}), 0.0);
    const auto& boundary = std::get<GroupoidBoundary>(g);
    osc::test::check_element(boundary.arrow.coords, el({1, 0}, {0}), 0.0);
}

TEST_CASE("the zero arrow stays on the diagonal") {
    Geometry geom = load_fixture("heis3.geom");
    ExpMapHandle fs = exp_folland_stein(geom);
    Vec m = {0.2, -0.4, 0.1};
    GroupoidElement g = chart_psi(fs, m, el({0, 0}, {0}), 0.25);
    const auto& pair = std::get<GroupoidPair>(g);
    osc::test::check_vec(pair.a, m, 1e-13);
}

TEST_CASE("the chart parameter is confined to [0, 1)") {
    Geometry geom = load_fixture("heis3.geom");
    ExpMapHandle fs = exp_folland_stein(geom);
    CHECK_THROWS_AS(chart_psi(fs, {0, 0, 0}, el({1, 0}, {0}), 1.0), Error);
    CHECK_THROWS_AS(chart_psi(fs, {0, 0, 0}, el({1, 0}, {0}), -0.25), Error);
}

// ============================================================================
// Chart inversion
// ============================================================================

TEST_CASE("chart_psi_inverse recovers closed-form flow displacements") {
    Geometry geom = load_fixture("heis3.geom");
    ExpMapHandle fs = exp_folland_stein(geom);
    double t = 0.125;
    GroupElement v = chart_psi_inverse(fs, {t, 0, 0}, {0, 0, 0}, t);
    osc::test::check_element(v, el({1, 0}, {0}), 1e-9);
}

TEST_CASE("equal points invert to the zero arrow") {
    Geometry geom = load_fixture("heis3.geom");
    ExpMapHandle fs = exp_folland_stein(geom);
    GroupElement v = chart_psi_inverse(fs, {0.3, 0.1, 0}, {0.3, 0.1, 0}, 0.25);
    CHECK(element_distance(v, el({0, 0}, {0})) <= 1e-9);
}

TEST_CASE("inversion round-trips random arrows through every handle kind") {
    for (const char* name : {"heis3.geom", "curved3.geom"}) {
        CAPTURE(name);
        Geometry geom = load_fixture(name);
        Vec m = {0.05, -0.1, 0.2};
        std::vector<ExpMapHandle> handles = {
            exp_folland_stein(geom),
            exp_from_connection(geom, Connection::frame_parallel(geom), {m}),
            exp_from_chart_family(geom, ChartFamilyKind::FrameAffine, {m})};
        Rng rng(29);
        for (const ExpMapHandle& h : handles) {
            CAPTURE(h.label());
            for (int trial = 0; trial < 25; ++trial) {
                GroupElement v = {rng.uniform_vec(2, -0.7, 0.7), rng.uniform_vec(1, -0.7, 0.7)};
                double t = 0.0625;
                Vec image = h.evaluate(m, gb_dilate(v, t));
                GroupElement back = chart_psi_inverse(h, image, m, t);
                CHECK(element_distance(back, v) <= 1e-9);
            }
        }
    }
}

TEST_CASE("inversion diverges when the target is outside the reachable box") {
    Geometry geom = load_fixture("heis3.geom");
    ExpMapHandle fs = exp_folland_stein(geom);
    CHECK_THROWS_AS(chart_psi_inverse(fs, {1.8, 0, 0}, {0, 0, 0}, 0.01), NewtonDivergence);
}

// ============================================================================
// Transition probes
// ============================================================================

TEST_CASE("a chart against itself has zero transition defect") {
    Geometry geom = load_fixture("heis3.geom");
    ExpMapHandle fs = exp_folland_stein(geom);
    TransitionReport r = transition_probe(fs, fs, {0, 0, 0}, el({0.4, -0.3}, {0.2}));
    CHECK(r.bounded);
    CHECK(r.order.at_noise_floor);
    CHECK(r.sup_ratio <= 1e-4);
}

TEST_CASE("two verified handles glue to first order") {
    Geometry geom = load_fixture("curved3.geom");
    Vec m = {0, 0, 0};
    ExpMapHandle fs = exp_folland_stein(geom);
    ExpMapHandle chart = exp_from_chart_family(geom, ChartFamilyKind::FrameAffine, {m});
    TransitionReport r = transition_probe(fs, chart, m, el({0.5, 0.3}, {-0.4}));
    CHECK(r.bounded);
    // the defect decays like t while the scaled ratio stays put
    CHECK(r.ratio_growth < 2.0);
}

TEST_CASE("the broken handle produces an unbounded transition") {
    Geometry geom = load_fixture("heis3.geom");
    ExpMapHandle fs = exp_folland_stein(geom);
    ExpMapHandle broken = make_broken_shear(geom);
    TransitionReport r = transition_probe(fs, broken, {0, 0, 0}, el({0.5, 0}, {0}));
    CHECK_FALSE(r.bounded);
    // defect stalls at h1^2, so the ratio grows like 1/t: factor 128 over the grid
    CHECK(r.ratio_growth >= 10.0);
}

// ============================================================================
// Convergence of pairs to arrows
// ============================================================================

TEST_CASE("polarized pair (t,t,t^2), (t,0,0) converges to ((0,1)|0)") {
    Geometry geom = load_fixture("heis3-polarized.geom");
    ExpMapHandle fs = exp_folland_stein(geom);
    ConvergenceReport r = convergence_probe(fs, geom.spec().curves.at("a"),
                                            geom.spec().curves.at("b"));
    CHECK(r.pass);
    osc::test::check_element(r.target, el({0, 1}, {0}), 1e-12);
    CHECK(r.extrapolated_residual <= 1e-6);
    CHECK(r.extrapolated_flow_defect <= 1e-6);
}

TEST_CASE("Heisenberg pair of frame flow lines") {
    Geometry geom = load_fixture("heis3.geom");
    ExpMapHandle fs = exp_folland_stein(geom);
    ConvergenceReport r = convergence_probe(fs, geom.spec().curves.at("xline"),
                                            geom.spec().curves.at("yline"));
    CHECK(r.pass);
    // ((1,0)|0) * ((0,1)|0)^-1 = ((1,-1)|1/2) with the Heisenberg b
    osc::test::check_element(r.target, el({1, -1}, {0.5}), 1e-12);
}

TEST_CASE("the diagonal pair converges to the identity arrow") {
    Geometry geom = load_fixture("heis3-polarized.geom");
    ExpMapHandle fs = exp_folland_stein(geom);
    const auto& a = geom.spec().curves.at("a");
    ConvergenceReport r = convergence_probe(fs, a, a);
    CHECK(r.pass);
    CHECK(norm_inf(r.target.h) == 0.0);
    CHECK(norm_inf(r.target.n) == 0.0);
    CHECK(r.extrapolated_residual <= 1e-9);
}

TEST_CASE("curved geometry: convergence with a genuine first-order tail") {
    Geometry geom = load_fixture("curved3.geom");
    ExpMapHandle fs = exp_folland_stein(geom);
    ConvergenceReport r = convergence_probe(fs, geom.spec().curves.at("bend"),
                                            geom.spec().curves.at("ray"));
    CHECK(r.pass);
    CHECK(r.extrapolated_residual <= 1e-6);
}

TEST_CASE("pairs with velocities outside H are rejected") {
    Geometry geom = load_fixture("heis3.geom");
    ExpMapHandle fs = exp_folland_stein(geom);
    CHECK_THROWS_AS(convergence_probe(fs, curve({"t", "0", "t"}), curve({"t", "0", "0"})),
                    NotTangentToH);
}

TEST_CASE("curves must share their base point") {
    Geometry geom = load_fixture("heis3.geom");
    ExpMapHandle fs = exp_folland_stein(geom);
    CHECK_THROWS_AS(convergence_probe(fs, curve({"t", "0", "0"}), curve({"t", "1", "0"})),
                    Error);
}

// ============================================================================
// Groupoid structure
// ============================================================================

TEST_CASE("pair composition, units and inverses") {
    Geometry geom = load_fixture("heis3.geom");
    Vec a = {1, 0, 0}, b = {0, 1, 0}, c = {0, 0, 1};
    GroupoidElement ab = GroupoidPair{a, b, 0.5};
    GroupoidElement bc = GroupoidPair{b, c, 0.5};

    GroupoidPair ac = std::get<GroupoidPair>(groupoid_compose(geom, ab, bc));
    osc::test::check_vec(ac.a, a, 0.0);
    osc::test::check_vec(ac.b, c, 0.0);

    GroupoidPair unit =
        std::get<GroupoidPair>(groupoid_compose(geom, ab, groupoid_inverse(geom, ab)));
    osc::test::check_vec(unit.a, a, 0.0);
    osc::test::check_vec(unit.b, a, 0.0);

    CHECK_THROWS_AS(groupoid_compose(geom, ab, GroupoidElement(GroupoidPair{c, a, 0.5})),
                    NotComposable);
    CHECK_THROWS_AS(groupoid_compose(geom, ab, GroupoidElement(GroupoidPair{b, c, 0.25})),
                    NotComposable);
}

TEST_CASE("boundary composition is the osculating group law") {
    Geometry geom = load_fixture("heis3.geom");
    Vec m = {0, 0, 0};
    std::string chart = geom.auto_chart(m).id;
    BilinearMap b = geom.osculating_b(m);
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        GroupElement u = {rng.uniform_vec(2, -1, 1), rng.uniform_vec(1, -1, 1)};
        GroupElement v = {rng.uniform_vec(2, -1, 1), rng.uniform_vec(1, -1, 1)};
        GroupoidElement prod = groupoid_compose(geom, GroupoidBoundary{{m, u, chart}},
                                                GroupoidBoundary{{m, v, chart}});
        osc::test::check_element(std::get<GroupoidBoundary>(prod).arrow.coords,
                                 gb_mul(b, u, v), 0.0);

        GroupoidElement inv = groupoid_inverse(geom, GroupoidBoundary{{m, u, chart}});
        osc::test::check_element(std::get<GroupoidBoundary>(inv).arrow.coords, gb_inv(b, u),
                                 0.0);
    }
    CHECK_THROWS_AS(
        groupoid_compose(geom, GroupoidElement(GroupoidBoundary{{m, el({1, 0}, {0}), chart}}),
                         GroupoidElement(GroupoidPair{m, m, 0.5})),
        NotComposable);
}
