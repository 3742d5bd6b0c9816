#include "osculate/report.hpp"

#include <cmath>
#include <ctime>
#include <fstream>

namespace osc {

Json to_json(const BilinearMap& b) {
    Json slices = Json::array();
    for (int k = 0; k < b.q(); ++k) {
        Json rows = Json::array();
        for (int i = 0; i < b.p(); ++i) {
            Json row = Json::array();
            for (int j = 0; j < b.p(); ++j) row.push_back(b.coeff(k, i, j));
            rows.push_back(std::move(row));
        }
        slices.push_back(std::move(rows));
    }
    return Json{{"p", b.p()}, {"q", b.q()}, {"coeffs", std::move(slices)}};
}

BilinearMap bilinear_from_json(const Json& j) {
    BilinearMap b(j.at("p").get<int>(), j.at("q").get<int>());
    const Json& slices = j.at("coeffs");
    for (int k = 0; k < b.q(); ++k)
        for (int i = 0; i < b.p(); ++i)
            for (int j2 = 0; j2 < b.p(); ++j2)
                b.coeff(k, i, j2) = slices.at(k).at(i).at(j2).get<double>();
    return b;
}

Json to_json(const GroupElement& g) { return Json{{"h", g.h}, {"n", g.n}}; }

GroupElement element_from_json(const Json& j) {
    return {j.at("h").get<Vec>(), j.at("n").get<Vec>()};
}

Json to_json(const SlopeFit& fit) {
    Json j{{"at_noise_floor", fit.at_noise_floor}, {"max_residual", fit.max_residual}};
    j["slope"] = std::isfinite(fit.slope) ? Json(fit.slope) : Json("inf");
    return j;
}

Json to_json(const ProbeReport& report) {
    return Json{{"name", report.name},
                {"t_grid", report.t_grid},
                {"residuals", report.residuals},
                {"fitted_slope", to_json(report.slope)},
                {"extrapolated_value", report.extrapolated},
                {"predicted_value", report.predicted},
                {"match_error", report.match_error},
                {"pass", report.pass}};
}

Json to_json(const VerifyReport& report) {
    Json defects = Json::array();
    for (const ArrowDefect& d : report.defects)
        defects.push_back(Json{{"arrow", to_json(d.arrow)},
                               {"defect", d.defect},
                               {"first_order_defect", d.first_order_defect}});
    return Json{{"handle", report.handle},
                {"defects", std::move(defects)},
                {"worst_defect", report.worst_defect},
                {"pass", report.pass}};
}

Json to_json(const TransitionReport& report) {
    return Json{{"handles", report.handles},
                {"t_grid", report.t_grid},
                {"defects", report.defects},
                {"self_noise", report.self_noise},
                {"ratios", report.ratios},
                {"sup_ratio", report.sup_ratio},
                {"ratio_growth", report.ratio_growth},
                {"signal_points", report.signal_points},
                {"order", to_json(report.order)},
                {"bounded", report.bounded}};
}

Json to_json(const ConvergenceReport& report) {
    return Json{{"handle", report.handle},
                {"target", to_json(report.target)},
                {"t_grid", report.t_grid},
                {"residuals", report.residuals},
                {"extrapolated_residual", report.extrapolated_residual},
                {"order", to_json(report.order)},
                {"flow_defects", report.flow_defects},
                {"extrapolated_flow_defect", report.extrapolated_flow_defect},
                {"pass", report.pass}};
}

Json describe_report(const Geometry& geom, const Vec& point, Rng& rng) {
    OsculatingGroup group = geom.osculating_group(point);

    Json brackets = Json::array();
    for (int i = 0; i < geom.hdim(); ++i)
        for (int j = i + 1; j < geom.hdim(); ++j) {
            Vec central = geom.osculating_bracket(point, basis_vector(geom.hdim(), i),
                                                  basis_vector(geom.hdim(), j));
            brackets.push_back(Json{{"i", i + 1}, {"j", j + 1}, {"central", central}});
        }

    Json samples = Json::array();
    for (int s = 0; s < 3; ++s) {
        GroupElement a{rng.uniform_vec(geom.hdim(), -1.0, 1.0),
                       rng.uniform_vec(geom.qdim(), -1.0, 1.0)};
        GroupElement b{rng.uniform_vec(geom.hdim(), -1.0, 1.0),
                       rng.uniform_vec(geom.qdim(), -1.0, 1.0)};
        samples.push_back(Json{{"a", to_json(a)},
                               {"b", to_json(b)},
                               {"product", to_json(gb_mul(group.b, a, b))}});
    }

    return Json{{"point", point},
                {"chart", group.chart_id},
                {"p", geom.hdim()},
                {"q", geom.qdim()},
                {"b", to_json(group.b)},
                {"skew_rank", group.skew_rank()},
                {"isomorphism_hint", group.isomorphism_hint()},
                {"brackets", std::move(brackets)},
                {"group_law_samples", std::move(samples)}};
}

Json report_envelope(const std::string& command, Json payload) {
    std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return Json{{"schema", "osculate/1"},
                {"command", command},
                {"generated_at", stamp},
                {"report", std::move(payload)}};
}

void write_probe_csv(const std::string& path, const ProbeReport& report) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << "t,residual\n";
    for (std::size_t i = 0; i < report.t_grid.size(); ++i)
        out << report.t_grid[i] << "," << report.residuals[i] << "\n";
}

}  // namespace osc
