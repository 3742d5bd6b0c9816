#pragma once

#include <string>
#include <vector>

#include "osculate/geometry.hpp"
#include "osculate/richardson.hpp"

namespace osc {

/// A chart-expressed vector field, optionally with an explicit trailing time
/// variable t (used for parabolic flows with t-dependent normal terms).
struct VectorField {
    std::vector<ExprPtr> comps;
    bool time_dependent = false;
    std::string label;

    template <class S>
    std::vector<S> eval(const std::vector<S>& state, double time) const {
        if (!time_dependent) return eval_components<S>(comps, state);
        std::vector<S> env = state;
        env.push_back(S(time));
        return eval_components<S>(comps, env);
    }

    VectorField negated() const;
};

/// Parses component expressions over the geometry's variables (plus t when
/// present in the text, appended as the last environment slot).
VectorField parse_field(const Geometry& geom, const std::vector<std::string>& component_text,
                        const std::string& label = {});

/// The constant-coefficient combination sum_i coeffs[i] X_i as expressions.
VectorField frame_combination(const Geometry& geom, const Vec& coeffs,
                              const std::string& label = {});

/// Looks a field up by frame name, else parses "a,b,c" component text.
VectorField resolve_field(const Geometry& geom, const std::string& text);

struct IntegratorSettings {
    int steps = 256;
    double max_time = 1.0;
};

/// Classical fixed-step RK4 over any jet-compatible scalar type.
template <class S, class F>
std::vector<S> rk4_integrate(const F& rhs, std::vector<S> state, double t0, double t1,
                             int steps) {
    if (steps < 16) throw StepUnderflow("integrator needs at least 16 steps");
    const double h = (t1 - t0) / steps;
    const std::size_t dim = state.size();
    auto shifted = [&](const std::vector<S>& x, const std::vector<S>& k, double c) {
        std::vector<S> out(dim);
        for (std::size_t i = 0; i < dim; ++i) out[i] = x[i] + S(c) * k[i];
        return out;
    };
    for (int s = 0; s < steps; ++s) {
        double t = t0 + s * h;
        std::vector<S> k1 = rhs(state, t);
        std::vector<S> k2 = rhs(shifted(state, k1, h / 2), t + h / 2);
        std::vector<S> k3 = rhs(shifted(state, k2, h / 2), t + h / 2);
        std::vector<S> k4 = rhs(shifted(state, k3, h), t + h);
        for (std::size_t i = 0; i < dim; ++i)
            state[i] = state[i] + S(h / 6.0) * (k1[i] + S(2.0) * (k2[i] + k3[i]) + k4[i]);
        for (std::size_t i = 0; i < dim; ++i)
            if (!std::isfinite(primal(state[i]))) throw NonFiniteState("flow state diverged");
    }
    return state;
}

/// Endpoint of the time-t flow of `field` from `point`.
Vec integrate_flow(const VectorField& field, const Vec& point, double t,
                   const IntegratorSettings& settings = {});

/// (Phi_1 ∘ Phi_2 ∘ ...)_t applied right to left at the shared time t.
Vec compose_flows(const std::vector<VectorField>& flows, const Vec& point, double t,
                  const IntegratorSettings& settings = {});

struct ArrowExtraction {
    ParabolicArrow arrow;
    double derivative_error = 0.0;  // worst Richardson error estimate
    double velocity_n_residual = 0.0;
};

/// Taylor coordinates of the flow line t -> (composed flows)_t(m) in the auto
/// chart at m: h from c'(0) (whose normal part must vanish), n = c''(0)^N / 2.
/// Derivatives come from dyadic-grid central differences on integrator output.
ArrowExtraction arrow_of_flowline(const Geometry& geom, const std::vector<VectorField>& flows,
                                  const Vec& point, const IntegratorSettings& settings = {},
                                  const DyadicGrid& grid = {});

/// Shared shape of the quantitative probe reports.
struct ProbeReport {
    std::string name;
    std::vector<double> t_grid;
    std::vector<double> residuals;
    SlopeFit slope;
    Vec extrapolated;
    Vec predicted;
    double match_error = 0.0;
    bool pass = false;
};

/// Second-order flow-composition check: measures the cross term of
/// Phi^X_t Phi^Y_t(m) - Phi^X_t(m) - Phi^Y_t(m) + m against t^2 (nabla_Y X)(m)
/// and fits the convergence order of what remains (expect >= 2.9).
ProbeReport oracle_second_order(const Geometry& geom, const VectorField& x,
                                const VectorField& y, const Vec& point,
                                const IntegratorSettings& settings = {},
                                const DyadicGrid& grid = {});

/// Extracts lim t^-2 (Phi^X_t Phi^Y_t Phi^-X_t Phi^-Y_t(m))^N in the auto
/// chart and compares it with the osculating bracket of X(m), Y(m).
ProbeReport flow_commutator_probe(const Geometry& geom, const VectorField& x,
                                  const VectorField& y, const Vec& point,
                                  const IntegratorSettings& settings = {},
                                  const DyadicGrid& grid = {});

struct HugReport {
    ParabolicArrow arrow;
    GroupElement logarithm;
    Vec expected_h;
    double residual = 0.0;
    bool pass = false;
};

/// For a field lying in H along its flow line, the flow-line arrow has
/// logarithm (h, 0) with h the frame coordinates of the field at m; i.e. its
/// Taylor coordinates are (h, b(h,h)/2).
HugReport check_hug(const Geometry& geom, const VectorField& field, const Vec& point,
                    const IntegratorSettings& settings = {}, const DyadicGrid& grid = {});

struct OracleEquivalence {
    GroupElement measured;   // arrow of the composed flow
    GroupElement algebraic;  // gb_mul of the individual arrows
    double residual = 0.0;
    bool pass = false;
};

/// The flow-integration oracle for the osculating group law: the arrow of a
/// composed pair of H-flows must equal the G_b product of their arrows.
OracleEquivalence oracle_flow_vs_group(const Geometry& geom, const VectorField& x,
                                       const VectorField& y, const Vec& point, double tol = 1e-6,
                                       const IntegratorSettings& settings = {},
                                       const DyadicGrid& grid = {});

}  // namespace osc
