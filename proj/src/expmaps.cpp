#include "osculate/expmaps.hpp"

#include <algorithm>
#include <cmath>

namespace osc {

namespace {

constexpr double kPreservationTol = 1e-8;

// Gradient of a possibly-constant Jet1, widened to `width` seeds.
Vec grad_or_zeros(const Jet1& x, int width) {
    if (x.is_constant()) return Vec(std::size_t(width), 0.0);
    return x.grad();
}

int seed_width(const std::vector<Jet1>& xs) {
    for (const Jet1& x : xs)
        if (!x.is_constant()) return x.vars();
    return 0;
}

}  // namespace

Connection Connection::zero(const Geometry& geom, std::string label) {
    Connection c;
    c.kind_ = Kind::Expressions;
    c.dim_ = geom.dim();
    c.label_ = std::move(label);
    c.entries_.assign(std::size_t(c.dim_) * c.dim_ * c.dim_, nullptr);
    return c;
}

Connection Connection::from_entries(const Geometry& geom,
                                    const std::vector<ChristoffelEntry>& entries,
                                    std::string label) {
    Connection c = zero(geom, std::move(label));
    for (const ChristoffelEntry& e : entries)
        c.entries_[(std::size_t(e.k) * c.dim_ + e.i) * c.dim_ + e.j] = e.expr;
    return c;
}

Connection Connection::frame_parallel(const Geometry& geom) {
    Connection c;
    c.kind_ = Kind::FrameParallel;
    c.dim_ = geom.dim();
    c.label_ = "frame-parallel";
    c.frame_ = geom.spec().frame;
    return c;
}

std::vector<double> Connection::christoffel(const std::vector<double>& state) const {
    int n = dim_;
    std::vector<double> gamma(std::size_t(n) * n * n, 0.0);
    if (kind_ == Kind::Expressions) {
        for (std::size_t e = 0; e < entries_.size(); ++e)
            if (entries_[e]) gamma[e] = eval_expr<double>(*entries_[e], state);
        return gamma;
    }

    // Frame-parallel: solve G_j X = -M_j with M_j(k,i) = d_j X_i^k.
    std::vector<Mat> jacs;
    jacs.reserve(std::size_t(n));
    std::vector<Vec> cols;
    for (int i = 0; i < n; ++i) {
        jacs.push_back(map_jet1([&](const std::vector<Jet1>& x) {
                           return eval_components<Jet1>(frame_[std::size_t(i)], x);
                       }, state)
                           .jacobian);
        cols.push_back(eval_components<double>(frame_[std::size_t(i)], state));
    }
    Mat frame_inv = inverse(Mat::from_columns(cols));
    for (int j = 0; j < n; ++j) {
        Mat mj(n, n);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) mj(k, i) = jacs[std::size_t(i)](k, j);
        Mat gj = mj.mul(frame_inv);  // G_j = -M_j X^-1
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) gamma[(std::size_t(k) * n + i) * n + j] = -gj(k, i);
    }
    return gamma;
}

std::vector<Jet1> Connection::christoffel(const std::vector<Jet1>& state) const {
    int n = dim_;
    std::vector<Jet1> gamma(std::size_t(n) * n * n, Jet1(0.0));
    if (kind_ == Kind::Expressions) {
        for (std::size_t e = 0; e < entries_.size(); ++e)
            if (entries_[e]) gamma[e] = eval_expr<Jet1>(*entries_[e], state);
        return gamma;
    }

    // Frame-parallel over seeded scalars. The entry d_j X_i^k at a seeded
    // state needs its own first-order data: value from the field Jacobian,
    // gradient from contracting the field Hessian with the state seeds.
    int width = seed_width(state);
    Vec value_point(state.size());
    for (std::size_t a = 0; a < state.size(); ++a) value_point[a] = primal(state[a]);

    std::vector<Jet1> frame_flat(std::size_t(n) * n, Jet1(0.0));  // X(k,i)
    std::vector<Jet1> m_all(std::size_t(n) * n * n, Jet1(0.0));   // (j,k,i)
    for (int i = 0; i < n; ++i) {
        MapDerivatives d = map_jet2([&](const std::vector<Jet2>& x) {
            return eval_components<Jet2>(frame_[std::size_t(i)], x);
        }, value_point);
        std::vector<Jet1> col = eval_components<Jet1>(frame_[std::size_t(i)], state);
        for (int k = 0; k < n; ++k) {
            frame_flat[std::size_t(k) * n + i] = col[std::size_t(k)];
            for (int j = 0; j < n; ++j) {
                Vec grad(std::size_t(width), 0.0);
                for (int a = 0; a < n; ++a) {
                    Vec sa = grad_or_zeros(state[std::size_t(a)], width);
                    for (int w = 0; w < width; ++w)
                        grad[std::size_t(w)] += d.hessian[std::size_t(k)](j, a) * sa[std::size_t(w)];
                }
                m_all[(std::size_t(j) * n + k) * n + i] = Jet1(d.jacobian(k, j), std::move(grad));
            }
        }
    }

    for (int j = 0; j < n; ++j) {
        // solve X^T G_j^T = -M_j^T
        std::vector<Jet1> a(std::size_t(n) * n, Jet1(0.0));
        std::vector<Jet1> b(std::size_t(n) * n, Jet1(0.0));
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                a[std::size_t(r) * n + c] = frame_flat[std::size_t(c) * n + r];  // X^T
                b[std::size_t(r) * n + c] = -m_all[(std::size_t(j) * n + c) * n + r];
            }
        lu_solve_inplace(a, n, b, n);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                gamma[(std::size_t(k) * n + i) * n + j] = b[std::size_t(i) * n + k];
    }
    return gamma;
}

Vec Connection::covariant_derivative(const Vec& state, const Vec& x_value, const Mat& x_jacobian,
                                     const Vec& y_value) const {
    std::vector<double> gamma = christoffel(state);
    int n = dim_;
    Vec out = x_jacobian.apply(y_value);  // Y(X) term
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out[std::size_t(k)] +=
                    gamma[(std::size_t(k) * n + i) * n + j] * x_value[std::size_t(i)] *
                    y_value[std::size_t(j)];
    return out;
}

HPreservation connection_preserves_h(const Geometry& geom, const Connection& conn,
                                     const std::vector<Vec>& sample_points) {
    HPreservation result;
    for (const Vec& x : sample_points) {
        AutoChart chart = geom.auto_chart(x);
        for (int i = 0; i < geom.hdim(); ++i) {
            Vec xi = chart.frame.column(i);
            Mat jac = geom.frame_field_jacobian(i, x);
            for (int dir = 0; dir < geom.dim(); ++dir) {
                Vec nabla = conn.covariant_derivative(x, xi, jac, chart.frame.column(dir));
                GroupElement parts = geom.split(chart.frame_inv.apply(nabla));
                result.worst_residual = std::max(result.worst_residual, norm_inf(parts.n));
            }
        }
    }
    result.ok = result.worst_residual <= kPreservationTol;
    return result;
}

// -- handle construction -------------------------------------------------------

ExpMapHandle exp_folland_stein(const Geometry& geom, IntegratorSettings settings) {
    ExpMapHandle h(geom);
    h.kind_ = ExpMapHandle::Kind::FrameFlow;
    h.label_ = "fs";
    h.settings_ = settings;
    return h;
}

ExpMapHandle exp_from_connection(const Geometry& geom, Connection conn,
                                 const std::vector<Vec>& sample_points,
                                 IntegratorSettings settings) {
    HPreservation check = connection_preserves_h(geom, conn, sample_points);
    if (!check.ok)
        throw NotHPreserving("connection does not preserve H (worst normal residual " +
                             std::to_string(check.worst_residual) + ")");
    ExpMapHandle h(geom);
    h.kind_ = ExpMapHandle::Kind::Connection;
    h.label_ = "conn:" + conn.label();
    h.settings_ = settings;
    h.connection_ = std::move(conn);
    return h;
}

ExpMapHandle exp_from_chart_family(const Geometry& geom, ChartFamilyKind family,
                                   const std::vector<Vec>& sample_points) {
    for (const Vec& m : sample_points) {
        // chart map as ambient expressions, centered at m
        std::vector<ExprPtr> chart_map;
        if (family == ChartFamilyKind::Translation) {
            for (int i = 0; i < geom.dim(); ++i)
                chart_map.push_back(ast::sub(ast::var(i, geom.spec().vars[std::size_t(i)]),
                                             ast::lit(m[std::size_t(i)])));
        } else {
            AutoChart chart = geom.auto_chart(m);
            for (int i = 0; i < geom.dim(); ++i) {
                ExprPtr acc;
                for (int j = 0; j < geom.dim(); ++j) {
                    if (chart.frame_inv(i, j) == 0.0) continue;
                    ExprPtr term = ast::mul(
                        ast::lit(chart.frame_inv(i, j)),
                        ast::sub(ast::var(j, geom.spec().vars[std::size_t(j)]),
                                 ast::lit(m[std::size_t(j)])));
                    acc = acc ? ast::add(acc, term) : term;
                }
                chart_map.push_back(acc ? acc : ast::lit(0.0));
            }
        }
        HChartValidation v = geom.validate_h_chart(chart_map, m);
        if (!v.ok)
            throw InvalidHChartFamily("family member at a sample point is not an H-chart (angle " +
                                      std::to_string(v.angle_residual) + ")");
    }
    ExpMapHandle h(geom);
    h.kind_ = ExpMapHandle::Kind::ChartFamily;
    h.family_ = family;
    h.label_ = family == ChartFamilyKind::FrameAffine ? "autochart" : "translation";
    return h;
}

ExpMapHandle make_broken_shear(const Geometry& geom) {
    ExpMapHandle h(geom);
    h.kind_ = ExpMapHandle::Kind::ShearBroken;
    h.label_ = "broken";
    return h;
}

// -- evaluation ---------------------------------------------------------------

template <class S>
std::vector<S> ExpMapHandle::eval_impl(const Vec& base, const std::vector<S>& hn) const {
    const int n = geom_.dim();
    const int p = geom_.hdim();
    const int q = geom_.qdim();
    if (int(hn.size()) != n) throw DimensionMismatch("arrow coordinate size");
    for (const S& c : hn)
        if (std::abs(primal(c)) > domain_radius_ + 1e-9)
            throw ArrowOutOfDomain("arrow outside the unit coordinate box");

    AutoChart chart = geom_.auto_chart(base);
    BilinearMap b = geom_.osculating_b(base);

    // log(h, n) = (h, n - b(h,h)/2)
    std::vector<S> h_part(hn.begin(), hn.begin() + p);
    std::vector<S> log_coords(hn.begin(), hn.end());
    std::vector<S> correction = b.apply(h_part, h_part);
    for (int k = 0; k < q; ++k)
        log_coords[std::size_t(p + k)] = log_coords[std::size_t(p + k)] - S(0.5) * correction[std::size_t(k)];

    auto affine_from_chart = [&](const std::vector<S>& coords) {
        std::vector<S> out;
        out.reserve(std::size_t(n));
        for (int i = 0; i < n; ++i) {
            S acc = S(base[std::size_t(i)]);
            for (int j = 0; j < n; ++j) acc = acc + S(chart.frame(i, j)) * coords[std::size_t(j)];
            out.push_back(acc);
        }
        return out;
    };

    switch (kind_) {
        case Kind::FrameFlow: {
            auto rhs = [&](const std::vector<S>& x, double) {
                std::vector<S> vel(std::size_t(n), S(0.0));
                for (int i = 0; i < n; ++i) {
                    std::vector<S> xi = geom_.frame_field<S>(i, x);
                    for (int c = 0; c < n; ++c)
                        vel[std::size_t(c)] = vel[std::size_t(c)] + log_coords[std::size_t(i)] * xi[std::size_t(c)];
                }
                return vel;
            };
            std::vector<S> state;
            for (double c : base) state.push_back(S(c));
            return rk4_integrate<S>(rhs, std::move(state), 0.0, 1.0, settings_.steps);
        }
        case Kind::Connection: {
            // geodesic system (x, u): x' = u, u^k' = -Gamma^k_{ij}(x) u^i u^j
            std::vector<S> state;
            for (double c : base) state.push_back(S(c));
            for (int i = 0; i < n; ++i) {
                S vel = S(0.0);
                for (int j = 0; j < n; ++j)
                    vel = vel + S(chart.frame(i, j)) * log_coords[std::size_t(j)];
                state.push_back(vel);
            }
            auto rhs = [&](const std::vector<S>& s, double) {
                std::vector<S> x(s.begin(), s.begin() + n);
                std::vector<S> u(s.begin() + n, s.end());
                std::vector<S> gamma = connection_.christoffel(x);
                std::vector<S> out(std::size_t(2 * n), S(0.0));
                for (int i = 0; i < n; ++i) out[std::size_t(i)] = u[std::size_t(i)];
                for (int k = 0; k < n; ++k) {
                    S acc = S(0.0);
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j)
                            acc = acc + gamma[(std::size_t(k) * n + i) * n + j] * u[std::size_t(i)] *
                                            u[std::size_t(j)];
                    out[std::size_t(n + k)] = -acc;
                }
                return out;
            };
            std::vector<S> end;
            try {
                end = rk4_integrate<S>(rhs, std::move(state), 0.0, 1.0, settings_.steps);
            } catch (const NonFiniteState&) {
                throw GeodesicBlowup("geodesic integration diverged");
            }
            return std::vector<S>(end.begin(), end.begin() + n);
        }
        case Kind::ChartFamily: {
            if (family_ == ChartFamilyKind::FrameAffine) {
                // Taylor coordinates of the auto chart are the arrow itself.
                std::vector<S> coords(hn.begin(), hn.end());
                return affine_from_chart(coords);
            }
            // translation family: chart coordinates are plain displacements.
            // The chart change from the auto chart is the linear map A, so
            // Taylor coordinates transfer as h' = [A h]^H, n' = [A n]^N.
            std::vector<S> coords(std::size_t(n), S(0.0));
            for (int i = 0; i < n; ++i) {
                S h_term = S(0.0), n_term = S(0.0);
                for (int j = 0; j < p; ++j)
                    h_term = h_term + S(chart.frame(i, j)) * hn[std::size_t(j)];
                for (int j = p; j < n; ++j)
                    n_term = n_term + S(chart.frame(i, j)) * hn[std::size_t(j)];
                coords[std::size_t(i)] = i < p ? h_term : n_term;
            }
            std::vector<S> out;
            for (int i = 0; i < n; ++i)
                out.push_back(S(base[std::size_t(i)]) + coords[std::size_t(i)]);
            return out;
        }
        case Kind::ShearBroken: {
            // coordinates (h, n + h_1^2) in the auto chart
            std::vector<S> coords(hn.begin(), hn.end());
            coords[std::size_t(p)] = coords[std::size_t(p)] + hn[0] * hn[0];
            return affine_from_chart(coords);
        }
    }
    throw Error("corrupt handle kind");
}

Vec ExpMapHandle::evaluate(const Vec& base, const GroupElement& arrow) const {
    return evaluate_coords(base, geom_.embed(arrow));
}

Vec ExpMapHandle::evaluate_coords(const Vec& base, const Vec& hn) const {
    return eval_impl<double>(base, hn);
}

std::vector<Jet1> ExpMapHandle::evaluate_coords(const Vec& base,
                                                const std::vector<Jet1>& hn) const {
    return eval_impl<Jet1>(base, hn);
}

VerifyReport verify_h_adapted(const ExpMapHandle& handle, const Vec& base,
                              const std::vector<GroupElement>& arrows, const DyadicGrid& grid,
                              double tol) {
    const Geometry& geom = handle.geometry();
    AutoChart chart = geom.auto_chart(base);

    VerifyReport report;
    report.handle = handle.label();
    for (const GroupElement& v : arrows) {
        // dilation-extended curve c(t) = exp_m(t h, t^2 n), two-sided in t
        auto curve = [&](double t) {
            Vec hn = concat(scaled(v.h, t), scaled(v.n, t * t));
            return handle.evaluate_coords(base, hn);
        };
        CurveDerivatives d = curve_from_samples(curve, 0.0, dyadic_sampler_options(grid));
        GroupElement vel = geom.split(chart.frame_inv.apply(d.first));
        GroupElement acc = geom.split(chart.frame_inv.apply(d.second));

        ArrowDefect defect;
        defect.arrow = v;
        defect.first_order_defect = std::max(norm_inf(vel.n), norm_inf(sub(vel.h, v.h)));
        defect.defect = std::max(norm_inf(sub(vel.h, v.h)),
                                 norm_inf(sub(scaled(acc.n, 0.5), v.n)));
        report.worst_defect = std::max(report.worst_defect, defect.defect);
        report.defects.push_back(std::move(defect));
    }
    report.pass = report.worst_defect < tol;
    return report;
}

}  // namespace osc
