#include <doctest.h>

#include <cmath>

#include "osculate/config.hpp"
#include "osculate/expr.hpp"
#include "osculate/rng.hpp"
#include "support.hpp"

using namespace osc;

namespace {
const std::vector<std::string> xyz = {"x", "y", "z"};
}

// ============================================================================
// Grammar and precedence
// ============================================================================

TEST_CASE("x + 2*y parses as Add(x, Mul(2, y))") {
    ExprPtr e = parse_expr("x + 2*y", xyz);
    REQUIRE(e->kind == ExprKind::Add);
    CHECK(e->a->kind == ExprKind::Var);
    REQUIRE(e->b->kind == ExprKind::Mul);
    CHECK(e->b->a->kind == ExprKind::Literal);
    CHECK(e->b->b->var_name == "y");
}

TEST_CASE("-y/2 parses as Neg(Div(y, 2))") {
    ExprPtr e = parse_expr("-y/2", xyz);
    REQUIRE(e->kind == ExprKind::Neg);
    REQUIRE(e->a->kind == ExprKind::Div);
    CHECK(e->a->a->var_name == "y");
    CHECK(e->a->b->literal == 2.0);
}

TEST_CASE("power towers fold right-associatively") {
    ExprPtr e = parse_expr("x ^ 2 ^ 3", xyz);
    REQUIRE(e->kind == ExprKind::Pow);
    CHECK(e->exponent == 8);
    CHECK(eval_expr<double>(e, {2.0, 0.0, 0.0}) == 256.0);
}

TEST_CASE("unary minus binds below the power") {
    // -x^2 must evaluate to -(x^2)
    CHECK(eval_expr<double>(parse_expr("-x^2", xyz), {3.0, 0.0, 0.0}) == -9.0);
    CHECK(eval_expr<double>(parse_expr("(-x)^2", xyz), {3.0, 0.0, 0.0}) == 9.0);
    CHECK(eval_expr<double>(parse_expr("x^-2", xyz), {2.0, 0.0, 0.0}) == 0.25);
}

TEST_CASE("functions and nesting") {
    ExprPtr e = parse_expr("sin(x) * cos(y) + exp(z / 2)", xyz);
    double got = eval_expr<double>(e, {0.3, -0.2, 0.4});
    CHECK(got == doctest::Approx(std::sin(0.3) * std::cos(-0.2) + std::exp(0.2)).epsilon(1e-15));
}

TEST_CASE("positioned syntax errors") {
    try {
        parse_expr("x + * y", xyz);
        FAIL("expected a syntax error");
    } catch (const SyntaxError& err) {
        CHECK(err.position == 4);
    }

    try {
        parse_expr("x + w", xyz);
        FAIL("expected an unknown identifier");
    } catch (const UnknownIdentifier& err) {
        CHECK(err.position == 4);
    }

    CHECK_THROWS_AS(parse_expr("x ^ y", xyz), NonIntegerExponent);
    CHECK_THROWS_AS(parse_expr("x ^ 2.5", xyz), NonIntegerExponent);
    CHECK_THROWS_AS(parse_expr("x + (y", xyz), SyntaxError);
    CHECK_THROWS_AS(parse_expr("", xyz), SyntaxError);
}

// ============================================================================
// Evaluation over jets
// ============================================================================

TEST_CASE("eval_jet: x*y at seeded (1,2)") {
    ExprPtr e = parse_expr("x*y", {"x", "y"});
    auto jets = Jet2::seed({1.0, 2.0});
    Jet2 out = eval_expr<Jet2>(e, jets);
    CHECK(out.value() == 2.0);
    osc::test::check_vec(out.grad(), {2.0, 1.0}, 0.0);
}

TEST_CASE("eval_jet: z + x^2 has a single hessian entry") {
    ExprPtr e = parse_expr("z + x^2", xyz);
    Jet2 out = eval_expr<Jet2>(e, Jet2::seed({0.0, 0.0, 0.0}));
    CHECK(out.hess(0, 0) == 2.0);
    double rest = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (!(i == 0 && j == 0)) rest = std::max(rest, std::abs(out.hess(i, j)));
    CHECK(rest == 0.0);
}

TEST_CASE("literals evaluate to constants") {
    Jet2 out = eval_expr<Jet2>(parse_expr("5", xyz), Jet2::seed({1.0, 2.0, 3.0}));
    CHECK(out.value() == 5.0);
    CHECK(out.is_constant());
}

TEST_CASE("real evaluation matches the jet value exactly") {
    Rng rng(42);
    const std::vector<std::string> sources = {
        "x*y - z^3 + sin(x)", "exp(x/4) * cos(y) - 2", "(x + y)*(x - y)/(z + 5)",
        "-x^2 + y^-1 * 8",    "sin(cos(x) + y)",
    };
    for (const std::string& src : sources) {
        ExprPtr e = parse_expr(src, xyz);
        for (int trial = 0; trial < 10; ++trial) {
            Vec at = rng.uniform_vec(3, 0.2, 1.0);
            double plain = eval_expr<double>(e, at);
            Jet2 jet = eval_expr<Jet2>(e, Jet2::seed(at));
            CHECK(plain == jet.value());
        }
    }
}

// ============================================================================
// Canonical printing
// ============================================================================

TEST_CASE("print∘parse is a fixed point on a corpus") {
    std::vector<std::string> corpus = {
        "x + 2*y",      "-y/2",          "x ^ 2 ^ 3",       "x - (y - z)",
        "(x + y)/2",    "x*y*z",         "a - b - c",       "sin(x)*cos(y)",
        "-(x*y)",       "x^-2 + 1e3",    "exp(-x) - 0.25",  "((x))",
        "2/(x/y)",      "x - -y",        "(-x)^3",          "1.5e-3 + x",
    };
    const std::vector<std::string> vars = {"x", "y", "z", "a", "b", "c", "t"};
    // plus every expression in the bundled geometry files
    for (const char* name :
         {"heis3.geom", "heis3-polarized.geom", "foliation3.geom", "curved3.geom",
          "quartic4.geom"}) {
        GeometrySpec spec = load_geometry(osc::test::fixture(name));
        for (const std::string& src : spec.expr_sources) corpus.push_back(src);
    }

    for (const std::string& src : corpus) {
        CAPTURE(src);
        ExprPtr first = parse_expr(src, vars);
        std::string printed = print_expr(first);
        ExprPtr second = parse_expr(printed, vars);
        CHECK(expr_equal(first, second));
        CHECK(print_expr(second) == printed);
    }
}

// ============================================================================
// Geometry configs
// ============================================================================

TEST_CASE("the Heisenberg fixture parses") {
    GeometrySpec spec = load_geometry(osc::test::fixture("heis3.geom"));
    CHECK(spec.name == "heis3");
    CHECK(spec.dim == 3);
    CHECK(spec.hdim == 2);
    CHECK(spec.qdim() == 1);
    REQUIRE(spec.frame.size() == 3);
    CHECK(spec.field_index("X2") == 1);
    CHECK(spec.curves.count("parab") == 1);
    CHECK(spec.charts.count("shear") == 1);
}

TEST_CASE("the polarized fixture parses") {
    GeometrySpec spec = load_geometry(osc::test::fixture("heis3-polarized.geom"));
    CHECK(spec.name == "heis3-polarized");
    CHECK(eval_expr<double>(spec.frame[1][2], {2.0, 0.0, 0.0}) == 2.0);  // Y2^3 = x
}

TEST_CASE("hdim = dim is rejected") {
    CHECK_THROWS_AS(load_geometry(osc::test::fixture("bad/p-equals-n.geom")), SchemaError);
}

TEST_CASE("malformed fixtures report typed errors") {
    CHECK_THROWS_AS(load_geometry(osc::test::fixture("bad/unknown-var.geom")),
                    UnknownIdentifier);
    CHECK_THROWS_AS(load_geometry(osc::test::fixture("bad/syntax.geom")), SyntaxError);
    CHECK_THROWS_AS(load_geometry(osc::test::fixture("bad/wrong-count.geom")),
                    DimensionMismatch);
}

TEST_CASE("run configs parse and resolve relative paths") {
    RunConfig cfg = load_run_config(osc::test::fixture("broken-exp.run"));
    CHECK(cfg.suite == "expmap");
    CHECK(cfg.handles == std::vector<std::string>{"fs", "broken"});
    CHECK(cfg.seed == 7);
    CHECK(cfg.points.size() == 1);
    CHECK_NOTHROW(load_geometry(cfg.geometry_path));
}
