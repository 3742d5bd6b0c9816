#include "osculate/flows.hpp"

#include <algorithm>
#include <cmath>

namespace osc {

namespace {

constexpr double kGeneratorTol = 1e-8;
constexpr double kVelocityTol = 1e-6;

void check_flow_time(double t, const IntegratorSettings& settings) {
    if (std::abs(t) > settings.max_time + 1e-12)
        throw Error("flow time " + std::to_string(t) + " outside the integrator range");
}

}  // namespace

VectorField VectorField::negated() const {
    VectorField out;
    out.time_dependent = time_dependent;
    out.label = label.empty() ? label : "-" + label;
    out.comps.reserve(comps.size());
    for (const ExprPtr& c : comps) out.comps.push_back(ast::neg(c));
    return out;
}

VectorField parse_field(const Geometry& geom, const std::vector<std::string>& component_text,
                        const std::string& label) {
    if (int(component_text.size()) != geom.dim())
        throw DimensionMismatch("field needs " + std::to_string(geom.dim()) + " components");
    std::vector<std::string> vars = geom.spec().vars;
    vars.push_back("t");
    VectorField f;
    f.label = label;
    for (const std::string& text : component_text) f.comps.push_back(parse_expr(text, vars));
    // trailing t slot is only wired in when some component mentions time
    std::function<bool(const Expr&)> uses_t = [&](const Expr& e) {
        if (e.kind == ExprKind::Var) return e.var == geom.dim();
        if (e.a && uses_t(*e.a)) return true;
        return e.b && uses_t(*e.b);
    };
    for (const ExprPtr& c : f.comps) f.time_dependent = f.time_dependent || uses_t(*c);
    if (!f.time_dependent) {
        f.comps.clear();
        for (const std::string& text : component_text)
            f.comps.push_back(parse_expr(text, geom.spec().vars));
    }
    return f;
}

VectorField frame_combination(const Geometry& geom, const Vec& coeffs, const std::string& label) {
    if (int(coeffs.size()) != geom.dim() && int(coeffs.size()) != geom.hdim())
        throw DimensionMismatch("frame combination needs p or n coefficients");
    VectorField f;
    f.label = label;
    for (int comp = 0; comp < geom.dim(); ++comp) {
        ExprPtr acc;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (coeffs[i] == 0.0) continue;
            ExprPtr term = ast::mul(ast::lit(coeffs[i]), geom.spec().frame[i][std::size_t(comp)]);
            acc = acc ? ast::add(acc, term) : term;
        }
        f.comps.push_back(acc ? acc : ast::lit(0.0));
    }
    return f;
}

VectorField resolve_field(const Geometry& geom, const std::string& text) {
    int idx = geom.spec().field_index(text);
    if (idx >= 0) {
        VectorField f;
        f.comps = geom.spec().frame[std::size_t(idx)];
        f.label = text;
        return f;
    }
    return parse_field(geom, split_component_list(text), text);
}

Vec integrate_flow(const VectorField& field, const Vec& point, double t,
                   const IntegratorSettings& settings) {
    check_flow_time(t, settings);
    auto rhs = [&](const std::vector<double>& x, double time) { return field.eval(x, time); };
    return rk4_integrate<double>(rhs, point, 0.0, t, settings.steps);
}

Vec compose_flows(const std::vector<VectorField>& flows, const Vec& point, double t,
                  const IntegratorSettings& settings) {
    Vec state = point;
    for (auto it = flows.rbegin(); it != flows.rend(); ++it)
        state = integrate_flow(*it, state, t, settings);
    return state;
}

namespace {

Vec composed_generator(const std::vector<VectorField>& flows, const Vec& point) {
    Vec gen(point.size(), 0.0);
    for (const VectorField& f : flows) gen = add(gen, f.eval(point, 0.0));
    return gen;
}

}  // namespace

ArrowExtraction arrow_of_flowline(const Geometry& geom, const std::vector<VectorField>& flows,
                                  const Vec& point, const IntegratorSettings& settings,
                                  const DyadicGrid& grid) {
    AutoChart chart = geom.auto_chart(point);

    Vec gen = composed_generator(flows, point);
    if (geom.h_membership_residual(point, gen) > kGeneratorTol)
        throw NotTangentToH("flow generator leaves H at the base point");

    CurveDerivatives d = curve_from_samples(
        [&](double t) { return compose_flows(flows, point, t, settings); }, 0.0,
        dyadic_sampler_options(grid));

    GroupElement vel = geom.split(chart.frame_inv.apply(d.first));
    GroupElement acc = geom.split(chart.frame_inv.apply(d.second));

    ArrowExtraction out;
    out.velocity_n_residual = norm_inf(vel.n);
    if (out.velocity_n_residual > kVelocityTol)
        throw NotTangentToH("flow line velocity has a normal component");
    out.derivative_error = std::max(d.error_first, d.error_second);
    out.arrow = {point, {vel.h, scaled(acc.n, 0.5)}, chart.id};
    return out;
}

ProbeReport oracle_second_order(const Geometry&, const VectorField& x, const VectorField& y,
                                const Vec& point, const IntegratorSettings& settings,
                                const DyadicGrid& grid) {
    ProbeReport report;
    report.name = "second-order";
    report.t_grid = grid.steps();

    // nabla_Y X at the point: directional derivative of X's components.
    MapJacobian jx = map_jet1(
        [&](const std::vector<Jet1>& s) { return x.eval<Jet1>(s, 0.0); }, point);
    report.predicted = jx.jacobian.apply(y.eval<double>(point, 0.0));

    std::vector<Vec> cross_seq;
    for (double t : report.t_grid) {
        Vec both = integrate_flow(x, integrate_flow(y, point, t, settings), t, settings);
        Vec only_x = integrate_flow(x, point, t, settings);
        Vec only_y = integrate_flow(y, point, t, settings);
        Vec r(point.size());
        for (std::size_t i = 0; i < point.size(); ++i)
            r[i] = both[i] - only_x[i] - only_y[i] + point[i];
        report.residuals.push_back(norm_inf(sub(r, scaled(report.predicted, t * t))));
        cross_seq.push_back(scaled(r, 1.0 / (t * t)));
    }

    // cross terms carry an O(t) error after the t^2 division
    ExtrapolatedVec cross = richardson_vec(cross_seq, 2.0, 1.0, 1.0);
    report.extrapolated = cross.value;
    report.match_error = norm_inf(sub(report.extrapolated, report.predicted));
    report.slope = fit_loglog_slope(report.t_grid, report.residuals);
    report.pass =
        (report.slope.at_noise_floor || report.slope.slope >= 2.9) && report.match_error <= 1e-6;
    return report;
}

ProbeReport flow_commutator_probe(const Geometry& geom, const VectorField& x,
                                  const VectorField& y, const Vec& point,
                                  const IntegratorSettings& settings, const DyadicGrid& grid) {
    if (x.time_dependent || y.time_dependent)
        throw Error("commutator probe needs autonomous fields");
    AutoChart chart = geom.auto_chart(point);

    auto h_coords = [&](const VectorField& f) {
        Vec v = f.eval<double>(point, 0.0);
        GroupElement parts = geom.split(chart.frame_inv.apply(v));
        if (norm_inf(parts.n) > kGeneratorTol * std::max(1.0, norm_inf(parts.h)))
            throw FieldNotInH("field leaves H at the base point");
        return parts.h;
    };
    Vec vx = h_coords(x);
    Vec vy = h_coords(y);

    ProbeReport report;
    report.name = "commutator";
    report.t_grid = grid.steps();
    report.predicted = geom.osculating_bracket(point, vx, vy);

    std::vector<VectorField> word = {x, y, x.negated(), y.negated()};
    std::vector<Vec> central_seq;
    for (double t : report.t_grid) {
        Vec k = compose_flows(word, point, t, settings);
        GroupElement parts = geom.split(chart.frame_inv.apply(sub(k, point)));
        central_seq.push_back(scaled(parts.n, 1.0 / (t * t)));
        report.residuals.push_back(norm_inf(sub(central_seq.back(), report.predicted)));
    }

    ExtrapolatedVec central = richardson_vec(central_seq, 2.0, 1.0, 1.0);
    report.extrapolated = central.value;
    report.match_error = norm_inf(sub(report.extrapolated, report.predicted));
    report.slope = fit_loglog_slope(report.t_grid, report.residuals);
    report.pass = report.match_error <= 1e-6;
    return report;
}

HugReport check_hug(const Geometry& geom, const VectorField& field, const Vec& point,
                    const IntegratorSettings& settings, const DyadicGrid& grid) {
    // spot-check H-membership along the flow line, not just at the point
    for (double t : {0.25, -0.25, 0.125, -0.125, 0.0625}) {
        Vec at = integrate_flow(field, point, t, settings);
        if (geom.h_membership_residual(at, field.eval<double>(at, 0.0)) > kVelocityTol)
            throw FieldNotInH("field leaves H along its flow line");
    }

    AutoChart chart = geom.auto_chart(point);
    HugReport report;
    report.arrow = arrow_of_flowline(geom, {field}, point, settings, grid).arrow;
    report.expected_h = geom.split(chart.frame_inv.apply(field.eval<double>(point, 0.0))).h;
    report.logarithm = gb_log(geom.osculating_b(point), report.arrow.coords);
    report.residual = std::max(norm_inf(sub(report.logarithm.h, report.expected_h)),
                               norm_inf(report.logarithm.n));
    report.pass = report.residual <= 1e-6;
    return report;
}

OracleEquivalence oracle_flow_vs_group(const Geometry& geom, const VectorField& x,
                                       const VectorField& y, const Vec& point, double tol,
                                       const IntegratorSettings& settings,
                                       const DyadicGrid& grid) {
    OracleEquivalence out;
    out.measured = arrow_of_flowline(geom, {x, y}, point, settings, grid).arrow.coords;
    GroupElement ax = arrow_of_flowline(geom, {x}, point, settings, grid).arrow.coords;
    GroupElement ay = arrow_of_flowline(geom, {y}, point, settings, grid).arrow.coords;
    out.algebraic = gb_mul(geom.osculating_b(point), ax, ay);
    out.residual = element_distance(out.measured, out.algebraic);
    out.pass = out.residual <= tol;
    return out;
}

}  // namespace osc
