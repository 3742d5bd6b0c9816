#pragma once

#include <variant>
#include <vector>

#include "osculate/expmaps.hpp"

namespace osc {

/// A point of the parabolic tangent groupoid: a pair (a, b, t) for t > 0, or
/// a parabolic arrow on the t = 0 boundary.
struct GroupoidPair {
    Vec a;
    Vec b;
    double t = 0.0;
};

struct GroupoidBoundary {
    ParabolicArrow arrow;
};

using GroupoidElement = std::variant<GroupoidPair, GroupoidBoundary>;

/// Pair composition (a,b,t)(b,c,t) = (a,c,t); boundary composition is the
/// osculating group law at the shared base point.
GroupoidElement groupoid_compose(const Geometry& geom, const GroupoidElement& lhs,
                                 const GroupoidElement& rhs, double tol = 1e-12);

GroupoidElement groupoid_inverse(const Geometry& geom, const GroupoidElement& g);

/// The glueing chart psi: t > 0 -> (exp_m(delta_t v), m, t); t = 0 -> (m, v).
GroupoidElement chart_psi(const ExpMapHandle& handle, const Vec& base, const GroupElement& v,
                          double t);

/// Inverts the glueing chart: the unique v with evaluate(b, delta_t v) = a,
/// by damped Newton iteration in the scaled coordinates, seeded at v = 0.
GroupElement chart_psi_inverse(const ExpMapHandle& handle, const Vec& a, const Vec& b, double t,
                               double residual_tol = 1e-10, int max_iterations = 50);

struct TransitionReport {
    std::string handles;
    std::vector<double> t_grid;
    std::vector<double> defects;     // |phi~(v,t) - v|
    std::vector<double> self_noise;  // same round trip through h1 alone
    std::vector<double> ratios;      // defect / t
    double sup_ratio = 0.0;
    double ratio_growth = 0.0;  // over above-noise points, t decreasing
    int signal_points = 0;
    SlopeFit order;
    bool bounded = false;
};

/// Measures phi~(v,t) = psi_1^-1(exp_2(m, delta_t v), m, t) against v over the
/// grid: first-order agreement of two H-adapted charts means defect = O(t).
/// Inverting at scale t amplifies the fixed point-space tolerance by 1/t^2,
/// so the probe calibrates itself by running the same round trip through h1
/// alone and judges growth only on defects above that noise profile.
TransitionReport transition_probe(const ExpMapHandle& h1, const ExpMapHandle& h2, const Vec& base,
                                  const GroupElement& v, const DyadicGrid& grid = {});

struct ConvergenceReport {
    std::string handle;
    GroupElement target;           // [a] * [b]^-1 computed algebraically
    std::vector<double> t_grid;
    std::vector<double> residuals;  // |psi^-1(a(t), b(t), t) - target|
    double extrapolated_residual = 0.0;
    SlopeFit order;
    std::vector<double> flow_defects;  // first-proof cross-check, see below
    double extrapolated_flow_defect = 0.0;
    bool pass = false;
};

/// Convergence of (a(t), b(t), t) to the arrow [a]*[b]^-1 in the chart of the
/// given handle. Curves are components in the single variable t and must
/// satisfy a(0) = b(0) with velocities in H. The flow cross-check freezes the
/// target arrow v0, composes the parabolic flow exp(delta_t v0) with b(t),
/// and measures the dilation-scaled gap to a(t).
ConvergenceReport convergence_probe(const ExpMapHandle& handle, const std::vector<ExprPtr>& a,
                                    const std::vector<ExprPtr>& b, const DyadicGrid& grid = {},
                                    double tol = 1e-6);

}  // namespace osc
