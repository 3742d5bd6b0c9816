#include "osculate/suites.hpp"

#include <algorithm>
#include <cmath>

#include "osculate/groupoid.hpp"

namespace osc {

namespace {

GroupElement random_element(Rng& rng, int p, int q, double radius) {
    return {rng.uniform_vec(p, -radius, radius), rng.uniform_vec(q, -radius, radius)};
}

std::vector<Vec> with_jitter(const std::vector<Vec>& points, Rng& rng, double radius) {
    std::vector<Vec> out = points;
    for (const Vec& p : points)
        for (int k = 0; k < 2; ++k)
            out.push_back(add(p, rng.uniform_vec(int(p.size()), -radius, radius)));
    return out;
}

void push_check(SuiteResult& result, Json check, bool pass) {
    check["pass"] = pass;
    result.checks.push_back(std::move(check));
    result.pass = result.pass && pass;
}

// -- group suite ---------------------------------------------------------------

void group_suite(const Geometry& geom, const Vec& point, const SuiteOptions& opt,
                 SuiteResult& result) {
    BilinearMap b = geom.osculating_b(point);
    Rng rng(opt.seed ^ 0x67726f7570ULL);
    int p = b.p(), q = b.q();

    double assoc = 0.0, inv = 0.0, roundtrip = 0.0, bch = 0.0, nilp = 0.0, dil = 0.0;
    for (int s = 0; s < opt.samples; ++s) {
        GroupElement ga = random_element(rng, p, q, 1.0);
        GroupElement gb = random_element(rng, p, q, 1.0);
        GroupElement gc = random_element(rng, p, q, 1.0);

        assoc = std::max(assoc, element_distance(gb_mul(b, gb_mul(b, ga, gb), gc),
                                                 gb_mul(b, ga, gb_mul(b, gb, gc))));
        inv = std::max(inv, element_distance(gb_mul(b, ga, gb_inv(b, ga)), gb_identity(b)));
        roundtrip = std::max(roundtrip, element_distance(gb_log(b, gb_exp(b, ga)), ga));

        // BCH for the two-step truncation: exp x exp y = exp(x + y + [x,y]/2)
        AlgebraElement sum{add(ga.h, gb.h), add(ga.n, gb.n)};
        AlgebraElement half_bracket = gb_bracket(b, ga, gb);
        sum.n = add(sum.n, scaled(half_bracket.n, 0.5));
        bch = std::max(bch, element_distance(gb_mul(b, gb_exp(b, ga), gb_exp(b, gb)),
                                             gb_exp(b, sum)));

        nilp = std::max(nilp, element_distance(gb_commutator(b, gb_commutator(b, ga, gb), gc),
                                               gb_identity(b)));

        double scale = 0.25 + rng.uniform(0.0, 2.0);
        dil = std::max(dil, element_distance(gb_dilate(gb_mul(b, ga, gb), scale),
                                             gb_mul(b, gb_dilate(ga, scale), gb_dilate(gb, scale))));
        dil = std::max(dil, element_distance(gb_exp(b, algebra_dilate(ga, scale)),
                                             gb_dilate(gb_exp(b, ga), scale)));
    }

    Json base{{"point", point}, {"samples", opt.samples}};
    Json c1 = base; c1["name"] = "group-axioms"; c1["residual"] = std::max(assoc, inv);
    push_check(result, std::move(c1), std::max(assoc, inv) <= 1e-12);
    Json c2 = base; c2["name"] = "exp-log-roundtrip"; c2["residual"] = roundtrip;
    push_check(result, std::move(c2), roundtrip <= 1e-12);
    Json c3 = base; c3["name"] = "bch-closure"; c3["residual"] = bch;
    push_check(result, std::move(c3), bch <= 1e-12);
    Json c4 = base; c4["name"] = "two-step-nilpotency"; c4["residual"] = nilp;
    push_check(result, std::move(c4), nilp == 0.0);
    Json c5 = base; c5["name"] = "dilation-automorphism"; c5["residual"] = dil;
    push_check(result, std::move(c5), dil <= 1e-12);
}

// -- oracle suite --------------------------------------------------------------

void oracle_suite(const Geometry& geom, const Vec& point, const SuiteOptions& opt,
                  SuiteResult& result) {
    Rng rng(opt.seed ^ 0x6f7261636cULL);
    int p = geom.hdim();

    auto random_h_field = [&](const std::string& label) {
        Vec coeff = rng.uniform_vec(p, -1.0, 1.0);
        return frame_combination(geom, coeff, label);
    };

    VectorField x1{geom.spec().frame[0], false, geom.spec().field_names[0]};
    VectorField x2 = p >= 2 ? VectorField{geom.spec().frame[1], false, geom.spec().field_names[1]}
                            : x1;

    {
        ProbeReport r = oracle_second_order(geom, x1, x2, point, opt.integrator, opt.grid);
        Json c{{"point", point}, {"name", "second-order-frame-pair"},
               {"match_error", r.match_error}, {"slope", to_json(r.slope)}};
        push_check(result, std::move(c), r.pass);
    }
    for (int s = 0; s < 2; ++s) {
        VectorField fx = random_h_field("rand-x");
        VectorField fy = random_h_field("rand-y");
        ProbeReport r = oracle_second_order(geom, fx, fy, point, opt.integrator, opt.grid);
        Json c{{"point", point}, {"name", "second-order-random"},
               {"match_error", r.match_error}, {"slope", to_json(r.slope)}};
        push_check(result, std::move(c), r.pass);
    }

    double worst_equiv = 0.0;
    int pairs = std::max(3, opt.samples / 10);
    for (int s = 0; s < pairs; ++s) {
        OracleEquivalence eq = oracle_flow_vs_group(geom, random_h_field("a"), random_h_field("b"),
                                                    point, 1e-6, opt.integrator, opt.grid);
        worst_equiv = std::max(worst_equiv, eq.residual);
    }
    Json ce{{"point", point}, {"name", "oracle-equivalence"}, {"pairs", pairs},
            {"residual", worst_equiv}};
    push_check(result, std::move(ce), worst_equiv <= 1e-6);

    if (p >= 2) {
        ProbeReport r = flow_commutator_probe(geom, x1, x2, point, opt.integrator, opt.grid);
        Json c{{"point", point}, {"name", "bracket-sign"}, {"match_error", r.match_error},
               {"extrapolated", r.extrapolated}, {"predicted", r.predicted}};
        push_check(result, std::move(c), r.pass);
    }

    double worst_hug = 0.0;
    for (int s = 0; s < 2; ++s) {
        HugReport hug = check_hug(geom, random_h_field("hug"), point, opt.integrator, opt.grid);
        worst_hug = std::max(worst_hug, hug.residual);
    }
    Json ch{{"point", point}, {"name", "tangent-curve-log"}, {"residual", worst_hug}};
    push_check(result, std::move(ch), worst_hug <= 1e-6);
}

// -- expmap suite ---------------------------------------------------------------

std::vector<GroupElement> sample_arrows(const Geometry& geom, const BilinearMap& b, Rng& rng,
                                        int count) {
    std::vector<GroupElement> arrows;
    arrows.reserve(std::size_t(count));
    for (int s = 0; s < count; ++s) {
        if (s % 5 == 4) {
            // a few log-H arrows: exp(h, 0), the rays tangent to H
            AlgebraElement x{rng.uniform_vec(geom.hdim(), -0.6, 0.6),
                             Vec(std::size_t(geom.qdim()), 0.0)};
            arrows.push_back(gb_exp(b, x));
        } else {
            arrows.push_back(random_element(rng, geom.hdim(), geom.qdim(), 0.6));
        }
    }
    return arrows;
}

void expmap_suite(const Geometry& geom, const Vec& point, const SuiteOptions& opt,
                  SuiteResult& result) {
    Rng rng(opt.seed ^ 0x6578706dULL);
    BilinearMap b = geom.osculating_b(point);
    std::vector<GroupElement> arrows = sample_arrows(geom, b, rng, opt.samples);

    std::vector<ExpMapHandle> handles;
    for (const std::string& name : opt.handles) {
        Rng jitter_rng(opt.seed ^ 0x686eULL);
        std::vector<Vec> samples = with_jitter({point}, jitter_rng, 0.1);
        handles.push_back(make_handle(geom, name, samples, opt.integrator));
    }

    for (const ExpMapHandle& handle : handles) {
        VerifyReport report = verify_h_adapted(handle, point, arrows, opt.grid);
        Json c{{"point", point}, {"name", "h-adapted-defect"}, {"handle", handle.label()},
               {"worst_defect", report.worst_defect}, {"arrows", int(arrows.size())}};
        push_check(result, std::move(c), report.pass);
    }

    // fs and the frame-parallel geodesic handle agree on log-H arrows.
    const ExpMapHandle* fs = nullptr;
    const ExpMapHandle* conn = nullptr;
    for (const ExpMapHandle& h : handles) {
        if (h.label() == "fs") fs = &h;
        if (h.kind() == ExpMapHandle::Kind::Connection) conn = &h;
    }
    if (fs && conn) {
        double worst = 0.0;
        for (int s = 0; s < 10; ++s) {
            AlgebraElement x{rng.uniform_vec(geom.hdim(), -0.6, 0.6),
                             Vec(std::size_t(geom.qdim()), 0.0)};
            GroupElement arrow = gb_exp(b, x);
            worst = std::max(worst, norm_inf(sub(fs->evaluate(point, arrow),
                                                 conn->evaluate(point, arrow))));
        }
        Json c{{"point", point}, {"name", "frame-flow-agreement"}, {"residual", worst}};
        push_check(result, std::move(c), worst <= 1e-8);
    }
}

// -- groupoid suite --------------------------------------------------------------

void groupoid_suite(const Geometry& geom, const Vec& point, const SuiteOptions& opt,
                    SuiteResult& result) {
    Rng rng(opt.seed ^ 0x67706f6964ULL);

    // groupoid laws at fixed t and on the boundary
    {
        Vec a = rng.uniform_vec(geom.dim(), -1.0, 1.0);
        Vec bpt = rng.uniform_vec(geom.dim(), -1.0, 1.0);
        Vec c = rng.uniform_vec(geom.dim(), -1.0, 1.0);
        double t = 0.5;
        GroupoidElement ab = GroupoidPair{a, bpt, t};
        GroupoidElement bc = GroupoidPair{bpt, c, t};
        GroupoidElement ac = groupoid_compose(geom, ab, bc);
        bool pair_ok = norm_inf(sub(std::get<GroupoidPair>(ac).a, a)) == 0.0 &&
                       norm_inf(sub(std::get<GroupoidPair>(ac).b, c)) == 0.0;
        GroupoidElement unit = groupoid_compose(geom, ab, groupoid_inverse(geom, ab));
        pair_ok = pair_ok && norm_inf(sub(std::get<GroupoidPair>(unit).a, a)) == 0.0;

        std::string chart_id = geom.auto_chart(point).id;
        BilinearMap b = geom.osculating_b(point);
        GroupElement u = random_element(rng, geom.hdim(), geom.qdim(), 0.6);
        GroupElement v = random_element(rng, geom.hdim(), geom.qdim(), 0.6);
        GroupoidElement bu = GroupoidBoundary{{point, u, chart_id}};
        GroupoidElement bv = GroupoidBoundary{{point, v, chart_id}};
        GroupoidElement prod = groupoid_compose(geom, bu, bv);
        double boundary_res = element_distance(
            std::get<GroupoidBoundary>(prod).arrow.coords, gb_mul(b, u, v));

        Json cj{{"point", point}, {"name", "groupoid-laws"}, {"residual", boundary_res}};
        push_check(result, std::move(cj), pair_ok && boundary_res == 0.0);
    }

    Rng jitter_rng(opt.seed ^ 0x686eULL);
    std::vector<Vec> samples = with_jitter({point}, jitter_rng, 0.1);
    std::vector<ExpMapHandle> handles;
    for (const std::string& name : opt.handles)
        handles.push_back(make_handle(geom, name, samples, opt.integrator));

    for (std::size_t i = 0; i < handles.size(); ++i)
        for (std::size_t j = i + 1; j < handles.size(); ++j) {
            GroupElement v = random_element(rng, geom.hdim(), geom.qdim(), 0.5);
            TransitionReport r = transition_probe(handles[i], handles[j], point, v, opt.grid);
            Json c{{"point", point}, {"name", "transition-bounded"}, {"pair", r.handles},
                   {"sup_ratio", r.sup_ratio}, {"ratio_growth", r.ratio_growth},
                   {"order", to_json(r.order)}};
            push_check(result, std::move(c), r.bounded);
        }

    if (!handles.empty()) {
        const auto& curves = geom.spec().curves;
        for (auto a_it = curves.begin(); a_it != curves.end(); ++a_it)
            for (auto b_it = curves.begin(); b_it != curves.end(); ++b_it) {
                if (a_it == b_it) continue;
                Vec start_a = eval_components<double>(a_it->second, std::vector<double>{0.0});
                Vec start_b = eval_components<double>(b_it->second, std::vector<double>{0.0});
                if (norm_inf(sub(start_a, start_b)) > 1e-12) continue;
                try {
                    ConvergenceReport r =
                        convergence_probe(handles.front(), a_it->second, b_it->second, opt.grid);
                    Json c{{"name", "pair-convergence"},
                           {"curves", a_it->first + "," + b_it->first},
                           {"target", to_json(r.target)},
                           {"residual", r.extrapolated_residual},
                           {"order", to_json(r.order)},
                           {"flow_defect", r.extrapolated_flow_defect}};
                    push_check(result, std::move(c), r.pass);
                } catch (const NotTangentToH&) {
                    // pairs violating the H-tangency hypothesis are rejected,
                    // not probed
                }
            }
        // diagonal case: target is the identity arrow
        if (!curves.empty()) {
            const auto& c0 = *curves.begin();
            ConvergenceReport r =
                convergence_probe(handles.front(), c0.second, c0.second, opt.grid);
            bool identity_target =
                norm_inf(r.target.h) == 0.0 && norm_inf(r.target.n) == 0.0;
            Json c{{"name", "diagonal-convergence"}, {"curves", c0.first},
                   {"residual", r.extrapolated_residual}};
            push_check(result, std::move(c), r.pass && identity_target);
        }
    }
}

}  // namespace

ExpMapHandle make_handle(const Geometry& geom, const std::string& name,
                         const std::vector<Vec>& sample_points,
                         const IntegratorSettings& settings) {
    if (name == "fs") return exp_folland_stein(geom, settings);
    if (name == "conn")
        return exp_from_connection(geom, Connection::frame_parallel(geom), sample_points,
                                   settings);
    if (name == "flat")
        return exp_from_connection(geom, Connection::zero(geom), sample_points, settings);
    if (name == "autochart")
        return exp_from_chart_family(geom, ChartFamilyKind::FrameAffine, sample_points);
    if (name == "translation")
        return exp_from_chart_family(geom, ChartFamilyKind::Translation, sample_points);
    if (name == "broken") return make_broken_shear(geom);
    if (name.rfind("table:", 0) == 0) {
        std::string table = name.substr(6);
        auto it = geom.spec().connections.find(table);
        if (it == geom.spec().connections.end())
            throw SchemaError("geometry has no connection section named '" + table + "'");
        return exp_from_connection(geom, Connection::from_entries(geom, it->second, table),
                                   sample_points, settings);
    }
    throw SchemaError("unknown handle '" + name + "'");
}

SuiteResult run_suite(const Geometry& geom, const std::string& suite, const SuiteOptions& opt) {
    std::vector<Vec> points = opt.points;
    if (points.empty()) points.push_back(Vec(std::size_t(geom.dim()), 0.0));

    SuiteResult result;
    bool all = suite == "all";
    if (!(all || suite == "group" || suite == "oracle" || suite == "expmap" ||
          suite == "groupoid"))
        throw SchemaError("unknown suite '" + suite + "'");

    for (const Vec& point : points) {
        if (all || suite == "group") group_suite(geom, point, opt, result);
        if (all || suite == "oracle") oracle_suite(geom, point, opt, result);
        if (all || suite == "expmap") expmap_suite(geom, point, opt, result);
        if (all || suite == "groupoid") groupoid_suite(geom, point, opt, result);
    }
    return result;
}

}  // namespace osc
