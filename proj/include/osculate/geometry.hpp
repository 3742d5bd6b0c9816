#pragma once

#include <string>
#include <vector>

#include "osculate/config.hpp"
#include "osculate/derive.hpp"
#include "osculate/expr.hpp"
#include "osculate/linalg.hpp"
#include "osculate/nilpotent.hpp"

namespace osc {

/// The affine H-chart at a base point: chart coordinates are frame
/// coordinates of the displacement, u = A^-1 (x - base) with A the frame
/// matrix, so the chart's coordinate vectors at the base are exactly the
/// frame fields.
struct AutoChart {
    Vec base;
    Mat frame;      // A, columns X_1(m) .. X_n(m)
    Mat frame_inv;  // A^-1
    std::string id;

    Vec to_chart(const Vec& point) const { return frame_inv.apply(sub(point, base)); }
    Vec from_chart(const Vec& coords) const { return add(base, frame.apply(coords)); }
};

/// Taylor coordinates (h, n) of a parabolic arrow, relative to a named chart.
struct ParabolicArrow {
    Vec base;
    GroupElement coords;
    std::string chart_id;
};

/// Osculating group data at a point: G_b on R^p x R^q in the chart named.
struct OsculatingGroup {
    Vec base;
    std::string chart_id;
    BilinearMap b;

    int skew_rank(double tol = 1e-10) const;
    std::string isomorphism_hint() const;  // "abelian" | "heisenberg-like" | "other"
};

struct HChartValidation {
    bool ok = false;
    double center_residual = 0.0;
    double angle_residual = 0.0;  // worst H-membership angle of the first p axes
};

class Geometry {
public:
    explicit Geometry(GeometrySpec spec);

    const GeometrySpec& spec() const { return spec_; }
    int dim() const { return spec_.dim; }
    int hdim() const { return spec_.hdim; }
    int qdim() const { return spec_.dim - spec_.hdim; }

    template <class S>
    std::vector<S> frame_field(int i, const std::vector<S>& state) const {
        return eval_components<S>(spec_.frame[std::size_t(i)], state);
    }

    Mat frame_matrix(const Vec& point) const;
    Mat frame_field_jacobian(int i, const Vec& point) const;

    /// Throws DegenerateFrame when the frame Gram condition exceeds 1e8.
    AutoChart auto_chart(const Vec& point) const;

    GroupElement split(const Vec& chart_coords) const;
    Vec embed(const GroupElement& coords) const;
    Vec embed_h(const Vec& h) const;

    /// Angle of `v` (ambient components at `point`) out of H_point.
    double h_membership_residual(const Vec& point, const Vec& v) const;

    /// b_{ij}^k = d_j X_i^{p+k} at the chart origin, in the auto chart.
    BilinearMap osculating_b(const Vec& point) const;

    /// Same tensor in an arbitrary centered H-chart given by its derivative
    /// data at `point` (ambient coordinates -> chart coordinates).
    BilinearMap osculating_b_in_chart(const Vec& point, const MapDerivatives& chart) const;

    OsculatingGroup osculating_group(const Vec& point) const;

    /// Central part of the osculating bracket, (b(v,w) - b(w,v)); the sign
    /// matches the four-flow commutator probe.
    Vec osculating_bracket(const Vec& point, const Vec& v, const Vec& w) const;

    /// Checks that chart_map (expressions over the ambient variables) is a
    /// valid H-chart at `point`. Throws NotCentered when chart_map(point) != 0.
    HChartValidation validate_h_chart(const std::vector<ExprPtr>& chart_map, const Vec& point,
                                      double tol = 1e-8) const;

    /// Derivative data at `point` of psi∘auto-chart, for a centered map psi
    /// written over the chart variables.
    MapDerivatives chart_through_auto(const AutoChart& chart,
                                      const std::vector<ExprPtr>& psi) const;

private:
    GeometrySpec spec_;
};

/// Taylor-coordinate change under a change of H-charts with derivative data
/// psi at 0: h' = [Dpsi h]^H, n' = [Dpsi n + D^2psi(h,h)/2]^N.
GroupElement taylor_change(const MapDerivatives& psi, const GroupElement& arrow, int hdim);

/// Parabolic pushforward T_H(phi): pushes the model curve of `arrow` through
/// phi and re-extracts Taylor coordinates in the target auto chart. Requires
/// D(phi)(H) inside H' at the base point.
ParabolicArrow parabolic_pushforward(const Geometry& source, const Geometry& target,
                                     const std::vector<ExprPtr>& phi, const ParabolicArrow& arrow,
                                     double tol = 1e-8);

}  // namespace osc
