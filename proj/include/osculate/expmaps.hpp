#pragma once

#include <string>
#include <vector>

#include "osculate/flows.hpp"
#include "osculate/geometry.hpp"

namespace osc {

/// Christoffel symbols Gamma^k_{ij}, either from an expression table or from
/// the frame-parallel construction (the connection for which every frame
/// field is parallel, assembled point by point from frame derivatives).
class Connection {
public:
    Connection() = default;

    static Connection zero(const Geometry& geom, std::string label = "flat");
    static Connection from_entries(const Geometry& geom, const std::vector<ChristoffelEntry>& entries,
                                   std::string label = "table");
    static Connection frame_parallel(const Geometry& geom);

    const std::string& label() const { return label_; }

    /// Flat n*n*n tensor, k-major: gamma[(k*n + i)*n + j] = Gamma^k_{ij}(x).
    std::vector<double> christoffel(const std::vector<double>& state) const;
    std::vector<Jet1> christoffel(const std::vector<Jet1>& state) const;

    /// nabla_Y X at a point, for ambient component vectors of X, Y with the
    /// Jacobian of X supplied (covariant derivative in chart coordinates).
    Vec covariant_derivative(const Vec& state, const Vec& x_value, const Mat& x_jacobian,
                             const Vec& y_value) const;

private:
    enum class Kind { Expressions, FrameParallel };

    Kind kind_ = Kind::Expressions;
    int dim_ = 0;
    std::string label_;
    std::vector<ExprPtr> entries_;               // dense n*n*n, null = 0
    std::vector<std::vector<ExprPtr>> frame_;    // frame-parallel only
};

struct HPreservation {
    bool ok = false;
    double worst_residual = 0.0;
};

/// Checks nabla_Y X in H for the H-frame fields X and arbitrary frame
/// directions Y at every sample point (tolerance 1e-8 on normal parts).
HPreservation connection_preserves_h(const Geometry& geom, const Connection& conn,
                                     const std::vector<Vec>& sample_points);

enum class ChartFamilyKind {
    FrameAffine,  // E_m(u) = m + A(m) u, the auto-chart family
    Translation,  // E_m(u) = m + u
};

/// An evaluable H-adapted exponential-map candidate with the uniform contract
/// evaluate(m, arrow) -> point; arrows carry Taylor coordinates in the auto
/// chart at m. Arrows beyond the unit coordinate box are rejected.
class ExpMapHandle {
public:
    enum class Kind { FrameFlow, Connection, ChartFamily, ShearBroken };

    Kind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    const Geometry& geometry() const { return geom_; }
    const IntegratorSettings& settings() const { return settings_; }

    Vec evaluate(const Vec& base, const GroupElement& arrow) const;

    /// Same map on concatenated (h, n) coordinates; the jet overload carries
    /// seed derivatives through for Newton Jacobians.
    Vec evaluate_coords(const Vec& base, const Vec& hn) const;
    std::vector<Jet1> evaluate_coords(const Vec& base, const std::vector<Jet1>& hn) const;

    friend ExpMapHandle exp_folland_stein(const Geometry& geom, IntegratorSettings settings);
    friend ExpMapHandle exp_from_connection(const Geometry& geom, Connection conn,
                                            const std::vector<Vec>& sample_points,
                                            IntegratorSettings settings);
    friend ExpMapHandle exp_from_chart_family(const Geometry& geom, ChartFamilyKind family,
                                              const std::vector<Vec>& sample_points);
    friend ExpMapHandle make_broken_shear(const Geometry& geom);

private:
    explicit ExpMapHandle(Geometry geom) : geom_(std::move(geom)) {}

    template <class S>
    std::vector<S> eval_impl(const Vec& base, const std::vector<S>& hn) const;

    Kind kind_ = Kind::FrameFlow;
    std::string label_;
    Geometry geom_;
    IntegratorSettings settings_;
    Connection connection_;
    ChartFamilyKind family_ = ChartFamilyKind::FrameAffine;
    double domain_radius_ = 1.0;
};

/// Folland-Stein construction: the time-1 flow of sum_i v_i X_i with
/// v = log(arrow) read in frame coordinates.
ExpMapHandle exp_folland_stein(const Geometry& geom, IntegratorSettings settings = {});

/// Geodesic construction for an H-preserving connection; the arrow is taken
/// through log and embedded with the frame (last q fields as the splitting).
/// Throws NotHPreserving when the sample check fails.
ExpMapHandle exp_from_connection(const Geometry& geom, Connection conn,
                                 const std::vector<Vec>& sample_points,
                                 IntegratorSettings settings = {});

/// Chart-family construction exp_m = E_m∘F_m^-1; each sampled member must be
/// a valid H-chart (throws InvalidHChartFamily otherwise).
ExpMapHandle exp_from_chart_family(const Geometry& geom, ChartFamilyKind family,
                                   const std::vector<Vec>& sample_points);

/// Negative control: a map with derivative identity at the origin whose
/// second-order normal jet is off by h_1^2. Passes the first-order
/// exponential-map contract but is not H-adapted.
ExpMapHandle make_broken_shear(const Geometry& geom);

struct ArrowDefect {
    GroupElement arrow;
    double defect = 0.0;             // | extracted - arrow | after extrapolation
    double first_order_defect = 0.0; // normal part of the extracted velocity
};

struct VerifyReport {
    std::string handle;
    std::vector<ArrowDefect> defects;
    double worst_defect = 0.0;
    bool pass = false;
};

/// Certifies the H-adapted contract on sample arrows: the Taylor coordinates
/// of t -> evaluate(m, delta_t v), extracted in the auto chart at m, must
/// reproduce v (extrapolated defect < 1e-6).
VerifyReport verify_h_adapted(const ExpMapHandle& handle, const Vec& base,
                              const std::vector<GroupElement>& arrows,
                              const DyadicGrid& grid = {}, double tol = 1e-6);

}  // namespace osc
