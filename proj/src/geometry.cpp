#include "osculate/geometry.hpp"

#include <charconv>
#include <cmath>

namespace osc {

namespace {

constexpr double kGramConditionLimit = 1e8;
constexpr double kCenterTol = 1e-10;

std::string format_point(const Vec& p) {
    std::string out = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof buf, p[i]);
        out.append(buf, res.ptr);
        if (i + 1 < p.size()) out += ',';
    }
    return out + ")";
}

}  // namespace

int OsculatingGroup::skew_rank(double tol) const { return numerical_rank(b.skew_stack(), tol); }

std::string OsculatingGroup::isomorphism_hint() const {
    int rank = skew_rank();
    if (rank == 0) return "abelian";
    if (b.q() == 1 && rank == b.p() && b.p() % 2 == 0) return "heisenberg-like";
    return "other";
}

Geometry::Geometry(GeometrySpec spec) : spec_(std::move(spec)) {}

Mat Geometry::frame_matrix(const Vec& point) const {
    std::vector<Vec> cols;
    cols.reserve(std::size_t(dim()));
    for (int i = 0; i < dim(); ++i) cols.push_back(frame_field<double>(i, point));
    return Mat::from_columns(cols);
}

Mat Geometry::frame_field_jacobian(int i, const Vec& point) const {
    return map_jet1([&](const std::vector<Jet1>& x) { return frame_field<Jet1>(i, x); }, point)
        .jacobian;
}

AutoChart Geometry::auto_chart(const Vec& point) const {
    Mat a = frame_matrix(point);
    double cond = condition_number(a.transposed().mul(a));
    if (!(cond < kGramConditionLimit))
        throw DegenerateFrame("frame Gram condition " + std::to_string(cond) + " at " +
                              format_point(point));
    AutoChart chart;
    chart.base = point;
    chart.frame_inv = inverse(a);
    chart.frame = std::move(a);
    chart.id = "auto:" + spec_.name + "@" + format_point(point);
    return chart;
}

GroupElement Geometry::split(const Vec& chart_coords) const {
    if (int(chart_coords.size()) != dim()) throw DimensionMismatch("chart coordinate size");
    GroupElement out;
    out.h.assign(chart_coords.begin(), chart_coords.begin() + hdim());
    out.n.assign(chart_coords.begin() + hdim(), chart_coords.end());
    return out;
}

Vec Geometry::embed(const GroupElement& coords) const {
    if (int(coords.h.size()) != hdim() || int(coords.n.size()) != qdim())
        throw DimensionMismatch("taylor coordinate size");
    return concat(coords.h, coords.n);
}

Vec Geometry::embed_h(const Vec& h) const {
    if (int(h.size()) != hdim()) throw DimensionMismatch("H coordinate size");
    return concat(h, Vec(std::size_t(qdim()), 0.0));
}

double Geometry::h_membership_residual(const Vec& point, const Vec& v) const {
    Vec coords = auto_chart(point).frame_inv.apply(v);
    double whole = norm_inf(coords);
    if (whole == 0.0) return 0.0;
    GroupElement parts = split(coords);
    return norm_inf(parts.n) / whole;
}

BilinearMap Geometry::osculating_b(const Vec& point) const {
    AutoChart chart = auto_chart(point);
    int p = hdim(), q = qdim();
    BilinearMap b(p, q);
    for (int i = 0; i < p; ++i) {
        // field components in chart coordinates: A^-1 J_{X_i} A
        Mat m = chart.frame_inv.mul(frame_field_jacobian(i, point)).mul(chart.frame);
        for (int j = 0; j < p; ++j)
            for (int k = 0; k < q; ++k) b.coeff(k, i, j) = m(p + k, j);
    }
    return b;
}

BilinearMap Geometry::osculating_b_in_chart(const Vec& point, const MapDerivatives& chart) const {
    int n = dim(), p = hdim(), q = qdim();
    if (norm_inf(chart.value) > kCenterTol)
        throw NotCentered("chart is not centered at the base point");

    Mat w = inverse(chart.jacobian);  // columns: chart coordinate vectors at the point
    AutoChart base_chart = auto_chart(point);

    // Express the i-th chart coordinate vector in the frame; it must lie in H.
    Mat frame_coeff = base_chart.frame_inv.mul(w);
    for (int i = 0; i < p; ++i)
        for (int k = 0; k < q; ++k)
            if (std::abs(frame_coeff(p + k, i)) > 1e-8)
                throw NotHChartChange("first chart axes leave H at the base point");

    // d_j (phi_* Y_i)^{p+k}(0) for the H-sections Y_i = sum_l coeff_{li} X_l
    // extending the chart coordinate vectors:
    //   D^2 phi(W e_j, Y_i(m)) + D phi . J_{Y_i} . W e_j
    std::vector<Mat> field_jacobians;
    field_jacobians.reserve(std::size_t(p));
    for (int l = 0; l < p; ++l) field_jacobians.push_back(frame_field_jacobian(l, point));

    BilinearMap b(p, q);
    for (int i = 0; i < p; ++i) {
        Mat jac_y(n, n);
        for (int l = 0; l < p; ++l) {
            double c = frame_coeff(l, i);
            if (c == 0.0) continue;
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s) jac_y(r, s) += c * field_jacobians[l](r, s);
        }
        Mat pushed = chart.jacobian.mul(jac_y).mul(w);
        Vec yi = w.column(i);
        for (int j = 0; j < p; ++j) {
            Vec wj = w.column(j);
            for (int k = 0; k < q; ++k) {
                double quad = 0.0;
                const Mat& hess = chart.hessian[std::size_t(p + k)];
                for (int r = 0; r < n; ++r)
                    for (int s = 0; s < n; ++s) quad += hess(r, s) * wj[r] * yi[s];
                b.coeff(k, i, j) = quad + pushed(p + k, j);
            }
        }
    }
    return b;
}

OsculatingGroup Geometry::osculating_group(const Vec& point) const {
    AutoChart chart = auto_chart(point);
    return {point, chart.id, osculating_b(point)};
}

Vec Geometry::osculating_bracket(const Vec& point, const Vec& v, const Vec& w) const {
    BilinearMap b = osculating_b(point);
    return sub(b.apply(v, w), b.apply(w, v));
}

HChartValidation Geometry::validate_h_chart(const std::vector<ExprPtr>& chart_map,
                                            const Vec& point, double tol) const {
    MapDerivatives d = map_jet2(
        [&](const std::vector<Jet2>& x) { return eval_components<Jet2>(chart_map, x); }, point);

    HChartValidation v;
    v.center_residual = norm_inf(d.value);
    if (v.center_residual > kCenterTol)
        throw NotCentered("chart map is off-center by " + std::to_string(v.center_residual));

    Mat w = inverse(d.jacobian);
    for (int i = 0; i < hdim(); ++i)
        v.angle_residual = std::max(v.angle_residual, h_membership_residual(point, w.column(i)));
    v.ok = v.angle_residual <= tol;
    return v;
}

MapDerivatives Geometry::chart_through_auto(const AutoChart& chart,
                                            const std::vector<ExprPtr>& psi) const {
    return map_jet2(
        [&](const std::vector<Jet2>& ambient) {
            // u = A^-1 (x - base), then psi(u)
            std::vector<Jet2> u;
            u.reserve(ambient.size());
            for (int i = 0; i < dim(); ++i) {
                Jet2 acc = 0.0;
                for (int j = 0; j < dim(); ++j)
                    acc = acc + Jet2(chart.frame_inv(i, j)) * (ambient[j] - Jet2(chart.base[j]));
                u.push_back(acc);
            }
            return eval_components<Jet2>(psi, u);
        },
        chart.base);
}

GroupElement taylor_change(const MapDerivatives& psi, const GroupElement& arrow, int hdim) {
    int n = psi.jacobian.rows();
    int qdim = n - hdim;
    if (int(arrow.h.size()) != hdim || int(arrow.n.size()) != qdim)
        throw DimensionMismatch("arrow does not match chart dimensions");
    if (norm_inf(psi.value) > kCenterTol)
        throw NotHChartChange("chart change is not centered");
    for (int k = 0; k < qdim; ++k)
        for (int i = 0; i < hdim; ++i)
            if (std::abs(psi.jacobian(hdim + k, i)) > 1e-8)
                throw NotHChartChange("derivative does not preserve H at the base point");

    Vec h_emb = concat(arrow.h, Vec(std::size_t(qdim), 0.0));
    Vec n_emb = concat(Vec(std::size_t(hdim), 0.0), arrow.n);
    Vec dh = psi.jacobian.apply(h_emb);
    Vec dn = psi.jacobian.apply(n_emb);

    GroupElement out;
    out.h.assign(dh.begin(), dh.begin() + hdim);
    out.n.resize(std::size_t(qdim));
    for (int k = 0; k < qdim; ++k) {
        double quad = 0.0;
        const Mat& hess = psi.hessian[std::size_t(hdim + k)];
        for (int r = 0; r < n; ++r)
            for (int s = 0; s < n; ++s) quad += hess(r, s) * h_emb[r] * h_emb[s];
        out.n[std::size_t(k)] = dn[std::size_t(hdim + k)] + 0.5 * quad;
    }
    return out;
}

ParabolicArrow parabolic_pushforward(const Geometry& source, const Geometry& target,
                                     const std::vector<ExprPtr>& phi, const ParabolicArrow& arrow,
                                     double tol) {
    AutoChart src_chart = source.auto_chart(arrow.base);
    Vec image = eval_components<double>(phi, arrow.base);

    // D(phi) must carry H into H' at the base point.
    MapJacobian first = map_jet1(
        [&](const std::vector<Jet1>& x) { return eval_components<Jet1>(phi, x); }, arrow.base);
    for (int i = 0; i < source.hdim(); ++i) {
        Vec pushed = first.jacobian.apply(src_chart.frame.column(i));
        if (target.h_membership_residual(image, pushed) > tol)
            throw NotHCompatible("map does not carry H into H' at the base point");
    }

    // Push the model curve c(t) = base + A(t h, t^2 n) through phi with a
    // jet in t, then read Taylor coordinates in the target auto chart.
    Vec h_emb = source.embed_h(arrow.coords.h);
    Vec n_emb = source.embed({Vec(std::size_t(source.hdim()), 0.0), arrow.coords.n});
    Vec dir1 = src_chart.frame.apply(h_emb);   // c'(0)
    Vec dir2 = src_chart.frame.apply(n_emb);   // c''(0)/2
    CurveDerivatives pushed = curve_jet2(
        [&](const Jet2& t) {
            std::vector<Jet2> state;
            state.reserve(arrow.base.size());
            for (std::size_t j = 0; j < arrow.base.size(); ++j)
                state.push_back(Jet2(arrow.base[j]) + Jet2(dir1[j]) * t +
                                Jet2(dir2[j]) * t * t);
            return eval_components<Jet2>(phi, state);
        },
        0.0);

    AutoChart dst_chart = target.auto_chart(image);
    GroupElement vel = target.split(dst_chart.frame_inv.apply(pushed.first));
    GroupElement acc = target.split(dst_chart.frame_inv.apply(pushed.second));
    if (norm_inf(vel.n) > tol * std::max(1.0, norm_inf(vel.h)))
        throw NotHCompatible("pushed curve is not tangent to H'");

    ParabolicArrow out;
    out.base = std::move(image);
    out.coords = {vel.h, scaled(acc.n, 0.5)};
    out.chart_id = dst_chart.id;
    return out;
}

}  // namespace osc
