#include "osculate/groupoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace osc {

namespace {

bool near(const Vec& a, const Vec& b, double tol) { return norm_inf(sub(a, b)) <= tol; }

}  // namespace

GroupoidElement groupoid_compose(const Geometry& geom, const GroupoidElement& lhs,
                                 const GroupoidElement& rhs, double tol) {
    if (std::holds_alternative<GroupoidPair>(lhs) && std::holds_alternative<GroupoidPair>(rhs)) {
        const auto& l = std::get<GroupoidPair>(lhs);
        const auto& r = std::get<GroupoidPair>(rhs);
        if (std::abs(l.t - r.t) > tol) throw NotComposable("pairs live at different times");
        if (!near(l.b, r.a, tol)) throw NotComposable("middle points do not match");
        return GroupoidPair{l.a, r.b, l.t};
    }
    if (std::holds_alternative<GroupoidBoundary>(lhs) &&
        std::holds_alternative<GroupoidBoundary>(rhs)) {
        const auto& l = std::get<GroupoidBoundary>(lhs).arrow;
        const auto& r = std::get<GroupoidBoundary>(rhs).arrow;
        if (!near(l.base, r.base, tol)) throw NotComposable("arrows sit at different points");
        ParabolicArrow out = l;
        out.coords = gb_mul(geom.osculating_b(l.base), l.coords, r.coords);
        return GroupoidBoundary{std::move(out)};
    }
    throw NotComposable("cannot compose a pair with a boundary arrow");
}

GroupoidElement groupoid_inverse(const Geometry& geom, const GroupoidElement& g) {
    if (std::holds_alternative<GroupoidPair>(g)) {
        const auto& p = std::get<GroupoidPair>(g);
        return GroupoidPair{p.b, p.a, p.t};
    }
    const auto& arrow = std::get<GroupoidBoundary>(g).arrow;
    ParabolicArrow out = arrow;
    out.coords = gb_inv(geom.osculating_b(arrow.base), arrow.coords);
    return GroupoidBoundary{std::move(out)};
}

GroupoidElement chart_psi(const ExpMapHandle& handle, const Vec& base, const GroupElement& v,
                          double t) {
    if (t < 0.0 || t >= 1.0) throw Error("chart parameter t must lie in [0, 1)");
    if (t == 0.0) {
        ParabolicArrow arrow{base, v, handle.geometry().auto_chart(base).id};
        return GroupoidBoundary{std::move(arrow)};
    }
    return GroupoidPair{handle.evaluate(base, gb_dilate(v, t)), base, t};
}

GroupElement chart_psi_inverse(const ExpMapHandle& handle, const Vec& a, const Vec& b, double t,
                               double residual_tol, int max_iterations) {
    if (!(t > 0.0)) throw Error("chart inversion needs t > 0");
    const Geometry& geom = handle.geometry();
    const int n = geom.dim();

    // Solve evaluate(b, u) = a in the scaled coordinates u = delta_t v; the
    // Jacobian there is well conditioned (frame matrix at u = 0).
    Vec u(std::size_t(n), 0.0);
    auto residual_of = [&](const Vec& candidate) {
        return norm_inf(sub(handle.evaluate_coords(b, candidate), a));
    };
    double residual = residual_of(u);

    for (int iter = 0; iter < max_iterations && residual >= residual_tol; ++iter) {
        std::vector<Jet1> out = handle.evaluate_coords(b, Jet1::seed(u));
        Mat jac(n, n);
        Vec g(std::size_t(n), 0.0);
        for (int i = 0; i < n; ++i) {
            g[std::size_t(i)] = out[std::size_t(i)].value() - a[std::size_t(i)];
            const Vec& grad = out[std::size_t(i)].grad();
            for (int j = 0; j < n; ++j) jac(i, j) = grad[std::size_t(j)];
        }
        Vec step = solve(jac, g);

        double lambda = 1.0;
        bool accepted = false;
        while (lambda > 1e-6) {
            Vec trial = sub(u, scaled(step, lambda));
            try {
                double trial_residual = residual_of(trial);
                if (trial_residual < residual) {
                    u = std::move(trial);
                    residual = trial_residual;
                    accepted = true;
                    break;
                }
            } catch (const ArrowOutOfDomain&) {
                // retreat into the domain box
            }
            lambda *= 0.5;
        }
        if (!accepted) break;
    }
    if (residual >= residual_tol)
        throw NewtonDivergence("chart inversion stalled at residual " + std::to_string(residual));

    GroupElement parts = geom.split(u);
    return {scaled(parts.h, 1.0 / t), scaled(parts.n, 1.0 / (t * t))};
}

TransitionReport transition_probe(const ExpMapHandle& h1, const ExpMapHandle& h2, const Vec& base,
                                  const GroupElement& v, const DyadicGrid& grid) {
    TransitionReport report;
    report.handles = h1.label() + "<-" + h2.label();
    report.t_grid = grid.steps();

    std::vector<double> signal_ts, signal_defects, signal_ratios;
    for (double t : report.t_grid) {
        GroupElement dilated = gb_dilate(v, t);
        GroupElement w = chart_psi_inverse(h1, h2.evaluate(base, dilated), base, t);
        GroupElement w_self = chart_psi_inverse(h1, h1.evaluate(base, dilated), base, t);
        double defect = element_distance(w, v);
        double noise = element_distance(w_self, v);
        report.defects.push_back(defect);
        report.self_noise.push_back(noise);
        report.ratios.push_back(defect / t);
        report.sup_ratio = std::max(report.sup_ratio, defect / t);
        if (defect > 10.0 * noise + 1e-12) {
            signal_ts.push_back(t);
            signal_defects.push_back(defect);
            signal_ratios.push_back(defect / t);
        }
    }

    report.signal_points = int(signal_ts.size());
    if (signal_ts.empty()) {
        // the two charts agree to measurement precision on the whole grid
        report.order.at_noise_floor = true;
        report.order.slope = std::numeric_limits<double>::infinity();
        report.bounded = true;
        return report;
    }
    report.ratio_growth = signal_ratios.back() / signal_ratios.front();
    report.order = fit_loglog_slope(signal_ts, signal_defects, 1e-12);
    report.bounded = report.order.at_noise_floor ||
                     (report.order.slope >= 0.9 && report.ratio_growth < 2.0);
    return report;
}

ConvergenceReport convergence_probe(const ExpMapHandle& handle, const std::vector<ExprPtr>& a,
                                    const std::vector<ExprPtr>& b, const DyadicGrid& grid,
                                    double tol) {
    const Geometry& geom = handle.geometry();

    auto curve_point = [&](const std::vector<ExprPtr>& c, double t) {
        return eval_components<double>(c, std::vector<double>{t});
    };
    auto curve_jets = [&](const std::vector<ExprPtr>& c) {
        return curve_jet2(
            [&](const Jet2& t) { return eval_components<Jet2>(c, std::vector<Jet2>{t}); }, 0.0);
    };

    Vec m = curve_point(a, 0.0);
    if (!near(m, curve_point(b, 0.0), 1e-10))
        throw Error("curves must share their base point a(0) = b(0)");

    AutoChart chart = geom.auto_chart(m);
    auto arrow_of = [&](const CurveDerivatives& d) {
        GroupElement vel = geom.split(chart.frame_inv.apply(d.first));
        GroupElement acc = geom.split(chart.frame_inv.apply(d.second));
        if (norm_inf(vel.n) > 1e-8 * std::max(1.0, norm_inf(vel.h)))
            throw NotTangentToH("curve velocity leaves H at the base point");
        return GroupElement{vel.h, scaled(acc.n, 0.5)};
    };
    GroupElement arrow_a = arrow_of(curve_jets(a));
    GroupElement arrow_b = arrow_of(curve_jets(b));

    BilinearMap bmap = geom.osculating_b(m);
    ConvergenceReport report;
    report.handle = handle.label();
    report.target = gb_mul(bmap, arrow_a, gb_inv(bmap, arrow_b));
    report.t_grid = grid.steps();

    std::vector<Vec> measured_seq;
    for (double t : report.t_grid) {
        GroupElement measured =
            chart_psi_inverse(handle, curve_point(a, t), curve_point(b, t), t);
        report.residuals.push_back(element_distance(measured, report.target));
        measured_seq.push_back(concat(measured.h, measured.n));

        // first-proof cross-check: the frozen-arrow parabolic flow composed
        // with b(t) must reproduce a(t) to arrow order.
        Vec flowed = handle.evaluate(curve_point(b, t), gb_dilate(report.target, t));
        GroupElement gap = geom.split(
            sub(chart.to_chart(curve_point(a, t)), chart.to_chart(flowed)));
        report.flow_defects.push_back(std::max(norm_inf(scaled(gap.h, 1.0 / t)),
                                               norm_inf(scaled(gap.n, 1.0 / (t * t)))));
    }

    ExtrapolatedVec extrap = richardson_vec(measured_seq, 2.0, 1.0, 1.0);
    GroupElement extrap_el = geom.split(extrap.value);
    report.extrapolated_residual = element_distance(extrap_el, report.target);
    report.extrapolated_flow_defect =
        richardson(report.flow_defects, 2.0, 1.0, 1.0).value;
    report.order = fit_loglog_slope(report.t_grid, report.residuals, 1e-9);
    report.pass = (report.order.at_noise_floor || report.order.slope >= 0.9) &&
                  report.extrapolated_residual <= tol &&
                  std::abs(report.extrapolated_flow_defect) <= tol;
    return report;
}

}  // namespace osc
