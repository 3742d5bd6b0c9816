#include <doctest.h>

#include <cmath>

#include "osculate/geometry.hpp"
#include "osculate/rng.hpp"
#include "support.hpp"

using namespace osc;
using osc::test::el;
using osc::test::load_fixture;

namespace {

MapDerivatives map_of_exprs(const std::vector<ExprPtr>& exprs, const Vec& point) {
    return map_jet2(
        [&](const std::vector<Jet2>& x) { return eval_components<Jet2>(exprs, x); }, point);
}

std::vector<ExprPtr> parse_map(const std::vector<std::string>& comps,
                               const std::vector<std::string>& vars) {
    std::vector<ExprPtr> out;
    for (const std::string& c : comps) out.push_back(parse_expr(c, vars));
    return out;
}

const std::vector<std::string> xyz = {"x", "y", "z"};

}  // namespace

// ============================================================================
// The osculating b-tensor
// ============================================================================

TEST_CASE("Heisenberg b at the origin") {
    Geometry geom = load_fixture("heis3.geom");
    BilinearMap b = geom.osculating_b({0, 0, 0});
    CHECK(b.coeff(0, 0, 1) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(b.coeff(0, 1, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(b.coeff(0, 0, 0) == 0.0);
    CHECK(b.coeff(0, 1, 1) == 0.0);
}

TEST_CASE("polarized b has a single entry") {
    Geometry geom = load_fixture("heis3-polarized.geom");
    BilinearMap b = geom.osculating_b({0, 0, 0});
    CHECK(b.coeff(0, 1, 0) == 1.0);
    CHECK(std::abs(b.coeff(0, 0, 0)) + std::abs(b.coeff(0, 0, 1)) + std::abs(b.coeff(0, 1, 1)) ==
          0.0);
}

TEST_CASE("coordinate frames have vanishing b everywhere") {
    Geometry geom = load_fixture("foliation3.geom");
    Rng rng(1);
    for (int trial = 0; trial < 5; ++trial) {
        BilinearMap b = geom.osculating_b(rng.uniform_vec(3, -2.0, 2.0));
        CHECK(b.max_abs_coeff() == 0.0);
    }
}

TEST_CASE("Heisenberg away from the origin keeps its skew class") {
    Geometry geom = load_fixture("heis3.geom");
    OsculatingGroup g = geom.osculating_group({0, 1, 0});
    CHECK(g.skew_rank() == 2);
    CHECK(g.isomorphism_hint() == "heisenberg-like");
    BilinearMap b = g.b;
    CHECK(b.coeff(0, 0, 1) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(b.coeff(0, 1, 0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("rank-two normal bundle: both slices of b") {
    Geometry geom = load_fixture("quartic4.geom");
    BilinearMap b = geom.osculating_b({1, 2, 0, 0});
    // slice 1 keeps the Heisenberg pattern
    CHECK(b.coeff(0, 0, 1) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(b.coeff(0, 1, 0) == doctest::Approx(0.5).epsilon(1e-12));
    // slice 2 switches on away from the origin: d(xy) along the frame
    CHECK(b.coeff(1, 1, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(b.coeff(1, 1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.coeff(1, 0, 0) == doctest::Approx(0.0));
    CHECK(b.coeff(1, 0, 1) == doctest::Approx(0.0));
}

TEST_CASE("degenerate frames are rejected") {
    GeometrySpec spec = parse_geometry(R"(
name = degenerate
dim = 3
hdim = 2
vars = x y z
[frame]
X1 = 1, 0, 0
X2 = 1, 0.000001, 0
X3 = 0, 0, 1
)");
    Geometry geom(spec);
    CHECK_THROWS_AS(geom.osculating_b({0, 0, 0}), DegenerateFrame);
}

TEST_CASE("frame-extension independence: scaling fields by functions = 1 at the point") {
    Geometry geom = load_fixture("heis3.geom");
    Vec point = {0.2, -0.3, 0.4};
    BilinearMap base = geom.osculating_b(point);

    // multiply each field by 1 + (shifted coordinates)^2, all equal to 1 at m
    GeometrySpec scaled_spec = geom.spec();
    const std::vector<std::string> scales = {
        "1 + (x - 0.2)^2", "1 + (y + 0.3)^2 + (x - 0.2)^2", "1 + (z - 0.4)^2"};
    for (std::size_t i = 0; i < scaled_spec.frame.size(); ++i) {
        ExprPtr factor = parse_expr(scales[i], xyz);
        for (auto& comp : scaled_spec.frame[i]) comp = ast::mul(factor, comp);
    }
    BilinearMap rescaled = Geometry(scaled_spec).osculating_b(point);

    for (int k = 0; k < base.q(); ++k)
        for (int i = 0; i < base.p(); ++i)
            for (int j = 0; j < base.p(); ++j)
                CHECK(std::abs(base.coeff(k, i, j) - rescaled.coeff(k, i, j)) <= 1e-10);
}

// ============================================================================
// The osculating bracket
// ============================================================================

TEST_CASE("bracket values and structure") {
    Geometry heis = load_fixture("heis3.geom");
    osc::test::check_vec(heis.osculating_bracket({0, 0, 0}, {1, 0}, {0, 1}), {-1.0}, 1e-14);
    osc::test::check_vec(heis.osculating_bracket({0, 0, 0}, {0.4, 0.7}, {0.4, 0.7}), {0.0}, 0.0);

    Geometry flat = load_fixture("foliation3.geom");
    osc::test::check_vec(flat.osculating_bracket({1, 2, 3}, {1, 0}, {0, 1}), {0.0}, 0.0);
}

TEST_CASE("the bracket equals the group commutator's central part bit for bit") {
    Geometry geom = load_fixture("curved3.geom");
    Vec point = {0.3, -0.2, 0.1};
    BilinearMap b = geom.osculating_b(point);
    Rng rng(53);
    for (int trial = 0; trial < 50; ++trial) {
        Vec v = rng.uniform_vec(2, -1, 1), w = rng.uniform_vec(2, -1, 1);
        GroupElement word = gb_commutator(b, {v, {0.0}}, {w, {0.0}});
        osc::test::check_vec(geom.osculating_bracket(point, v, w), word.n, 0.0);
    }
}

// ============================================================================
// H-chart validation
// ============================================================================

TEST_CASE("identity chart at the origin is an H-chart for heis3") {
    Geometry geom = load_fixture("heis3.geom");
    HChartValidation v = geom.validate_h_chart(parse_map({"x", "y", "z"}, xyz), {0, 0, 0});
    CHECK(v.ok);
    CHECK(v.angle_residual <= 1e-12);
}

TEST_CASE("translation chart fails away from the origin") {
    Geometry geom = load_fixture("heis3.geom");
    HChartValidation v =
        geom.validate_h_chart(parse_map({"x", "y - 1", "z"}, xyz), {0, 1, 0});
    CHECK_FALSE(v.ok);
    CHECK(v.angle_residual > 0.1);  // e1 sits visibly outside H at (0,1,0)
}

TEST_CASE("the shear chart is an H-chart at the origin") {
    Geometry geom = load_fixture("heis3.geom");
    HChartValidation v =
        geom.validate_h_chart(parse_map({"x", "y", "z + x^2"}, xyz), {0, 0, 0});
    CHECK(v.ok);
}

TEST_CASE("off-center chart maps are rejected") {
    Geometry geom = load_fixture("heis3.geom");
    CHECK_THROWS_AS(geom.validate_h_chart(parse_map({"x", "y", "z"}, xyz), {0, 1, 0}),
                    NotCentered);
}

// ============================================================================
// Taylor-coordinate changes
// ============================================================================

TEST_CASE("shear chart change adds half the raw second derivative") {
    Geometry geom = load_fixture("heis3.geom");
    MapDerivatives psi = map_of_exprs(geom.spec().charts.at("shear"), {0, 0, 0});
    // model curve (t, 0, t^2 * 0) maps to (t, 0, t^2), whose Taylor n-part is 1
    GroupElement out = taylor_change(psi, el({1, 0}, {0}), 2);
    osc::test::check_element(out, el({1, 0}, {1.0}), 1e-14);
}

TEST_CASE("linear H-preserving changes have no quadratic term") {
    Geometry geom = load_fixture("heis3.geom");
    MapDerivatives psi = map_of_exprs(parse_map({"2*x + y", "y", "3*z"}, xyz), {0, 0, 0});
    GroupElement out = taylor_change(psi, el({0.5, -1.0}, {0.25}), 2);
    osc::test::check_element(out, el({0.0, -1.0}, {0.75}), 1e-14);
}

TEST_CASE("identity change is the identity") {
    Geometry geom = load_fixture("heis3.geom");
    MapDerivatives psi = map_of_exprs(parse_map({"x", "y", "z"}, xyz), {0, 0, 0});
    GroupElement arrow = el({0.3, 0.7}, {-0.2});
    osc::test::check_element(taylor_change(psi, arrow, 2), arrow, 0.0);
}

TEST_CASE("changes that break H are rejected") {
    MapDerivatives psi = map_of_exprs(parse_map({"x", "y", "z + x"}, xyz), {0, 0, 0});
    CHECK_THROWS_AS(taylor_change(psi, el({1, 0}, {0}), 2), NotHChartChange);
}

TEST_CASE("taylor_change is an isomorphism between the two chart presentations") {
    Geometry geom = load_fixture("heis3.geom");
    Vec origin = {0, 0, 0};
    BilinearMap b1 = geom.osculating_b(origin);

    AutoChart auto_chart = geom.auto_chart(origin);
    MapDerivatives chart2 = geom.chart_through_auto(auto_chart, geom.spec().charts.at("shear"));
    BilinearMap b2 = geom.osculating_b_in_chart(origin, chart2);

    // frame pushforward through the shear: b2 = b1 + 2 e1 (x) e1
    CHECK(b2.coeff(0, 0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(b2.coeff(0, 0, 1) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(b2.coeff(0, 1, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(b2.coeff(0, 1, 1) == doctest::Approx(0.0));

    MapDerivatives psi = map_of_exprs(geom.spec().charts.at("shear"), origin);
    Rng rng(99);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        GroupElement x = el(rng.uniform_vec(2, -1, 1), rng.uniform_vec(1, -1, 1));
        GroupElement y = el(rng.uniform_vec(2, -1, 1), rng.uniform_vec(1, -1, 1));
        GroupElement lhs = taylor_change(psi, gb_mul(b1, x, y), 2);
        GroupElement rhs = gb_mul(b2, taylor_change(psi, x, 2), taylor_change(psi, y, 2));
        worst = std::max(worst, element_distance(lhs, rhs));
    }
    CHECK(worst <= 1e-10);
}

// ============================================================================
// Parabolic pushforward
// ============================================================================

TEST_CASE("pushforward through a chart change matches taylor_change") {
    Geometry geom = load_fixture("heis3.geom");
    Vec origin = {0, 0, 0};
    MapDerivatives psi = map_of_exprs(geom.spec().charts.at("shear"), origin);

    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        GroupElement arrow = el(rng.uniform_vec(2, -1, 1), rng.uniform_vec(1, -1, 1));
        ParabolicArrow pushed = parabolic_pushforward(
            geom, geom, geom.spec().charts.at("shear"), {origin, arrow, "auto"});
        GroupElement direct = taylor_change(psi, arrow, 2);
        // the shear is its own auto-chart change at 0, so the coordinates of
        // the pushforward in the target auto chart agree with taylor_change
        CHECK(element_distance(pushed.coords, direct) <= 1e-12);
    }
}

TEST_CASE("pushforward through the identity is the identity") {
    Geometry geom = load_fixture("heis3.geom");
    GroupElement arrow = el({0.4, -0.1}, {0.9});
    ParabolicArrow pushed =
        parabolic_pushforward(geom, geom, parse_map({"x", "y", "z"}, xyz),
                              {{0, 0, 0}, arrow, "auto"});
    osc::test::check_element(pushed.coords, arrow, 1e-14);
}

TEST_CASE("the swap map exchanges the frame directions") {
    Geometry geom = load_fixture("heis3.geom");
    ParabolicArrow pushed = parabolic_pushforward(
        geom, geom, geom.spec().charts.at("swap"), {{0, 0, 0}, el({1, 0}, {0}), "auto"});
    osc::test::check_element(pushed.coords, el({0, 1}, {0}), 1e-14);
}

TEST_CASE("pushforward is functorial under composition") {
    Geometry geom = load_fixture("heis3.geom");
    Vec origin = {0, 0, 0};
    // swap∘shear, composed by hand
    std::vector<ExprPtr> composed = parse_map({"y", "x", "-z - x^2"}, xyz);

    Rng rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        GroupElement arrow = el(rng.uniform_vec(2, -1, 1), rng.uniform_vec(1, -1, 1));
        ParabolicArrow two_steps = parabolic_pushforward(
            geom, geom, geom.spec().charts.at("swap"),
            parabolic_pushforward(geom, geom, geom.spec().charts.at("shear"),
                                  {origin, arrow, "auto"}));
        ParabolicArrow one_step =
            parabolic_pushforward(geom, geom, composed, {origin, arrow, "auto"});
        CHECK(element_distance(two_steps.coords, one_step.coords) <= 1e-10);
        osc::test::check_vec(two_steps.base, one_step.base, 1e-12);
    }
}

TEST_CASE("the polarized-to-Heisenberg map is a frame isomorphism") {
    Geometry polarized = load_fixture("heis3-polarized.geom");
    Geometry heis = load_fixture("heis3.geom");
    // phi(x,y,z) = (x, y, z - xy/2) carries Y1,Y2,Y3 exactly onto X1,X2,X3
    std::vector<ExprPtr> phi = parse_map({"x", "y", "z - x*y/2"}, xyz);

    ParabolicArrow pushed =
        parabolic_pushforward(polarized, heis, phi, {{0, 0, 0}, el({1, 1}, {1}), "auto"});
    // the induced map is the quadratic isomorphism between the two b-tensors:
    // (h, n) -> (h, n - h1 h2 / 2)
    osc::test::check_element(pushed.coords, el({1, 1}, {0.5}), 1e-14);

    // and it is a group homomorphism from G_{b_pol} to G_{b_heis}
    BilinearMap b_pol = polarized.osculating_b({0, 0, 0});
    BilinearMap b_heis = heis.osculating_b({0, 0, 0});
    Rng rng(23);
    auto push = [&](const GroupElement& g) {
        return parabolic_pushforward(polarized, heis, phi, {{0, 0, 0}, g, "auto"}).coords;
    };
    for (int trial = 0; trial < 20; ++trial) {
        GroupElement x = el(rng.uniform_vec(2, -1, 1), rng.uniform_vec(1, -1, 1));
        GroupElement y = el(rng.uniform_vec(2, -1, 1), rng.uniform_vec(1, -1, 1));
        CHECK(element_distance(push(gb_mul(b_pol, x, y)), gb_mul(b_heis, push(x), push(y))) <=
              1e-10);
    }
}

TEST_CASE("maps that do not respect H are rejected") {
    Geometry geom = load_fixture("heis3.geom");
    // the shear is H-compatible only where x = 0; probe it at x != 0
    CHECK_THROWS_AS(
        parabolic_pushforward(geom, geom, geom.spec().charts.at("shear"),
                              {{0.5, 0, 0}, el({1, 0}, {0}), "auto"}),
        NotHCompatible);
}
