#include "osculate/derive.hpp"

#include <cmath>

namespace osc {

MapDerivatives map_jet2(const JetMap& f, const Vec& point) {
    std::vector<Jet2> seeded = Jet2::seed(point);
    std::vector<Jet2> out = f(seeded);
    int n = int(point.size());
    int m = int(out.size());
    MapDerivatives d;
    d.value.resize(m);
    d.jacobian = Mat(m, n);
    d.hessian.reserve(m);
    for (int k = 0; k < m; ++k) {
        const Jet2 jet = out[k].is_constant() ? Jet2::constant(out[k].value(), n) : out[k];
        d.value[k] = jet.value();
        for (int j = 0; j < n; ++j) d.jacobian(k, j) = jet.grad()[j];
        d.hessian.push_back(jet.hess_matrix());
    }
    return d;
}

MapJacobian map_jet1(const Jet1Map& f, const Vec& point) {
    std::vector<Jet1> seeded = Jet1::seed(point);
    std::vector<Jet1> out = f(seeded);
    int n = int(point.size());
    MapJacobian d;
    d.value.resize(out.size());
    d.jacobian = Mat(int(out.size()), n);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const Jet1 jet = out[k].is_constant() ? Jet1::constant(out[k].value(), n) : out[k];
        d.value[k] = jet.value();
        for (int j = 0; j < n; ++j) d.jacobian(int(k), j) = jet.grad()[j];
    }
    return d;
}

CurveDerivatives curve_jet2(const JetCurve& c, double t0) {
    std::vector<Jet2> seeded = Jet2::seed({t0});
    std::vector<Jet2> out = c(seeded[0]);
    CurveDerivatives d;
    for (const Jet2& raw : out) {
        const Jet2 jet = raw.is_constant() ? Jet2::constant(raw.value(), 1) : raw;
        d.value.push_back(jet.value());
        d.first.push_back(jet.grad()[0]);
        d.second.push_back(jet.hess(0, 0));
    }
    return d;
}

SamplerOptions dyadic_sampler_options(const DyadicGrid& grid, int max_levels) {
    SamplerOptions opt;
    opt.h0 = std::ldexp(1.0, -grid.k_min);
    opt.points = grid.k_max - grid.k_min + 1;
    opt.max_levels = max_levels;
    return opt;
}

CurveDerivatives curve_from_samples(const std::function<Vec(double)>& c, double t0,
                                    const SamplerOptions& opt) {
    Vec center = c(t0);
    int dim = int(center.size());

    std::vector<Vec> d1_seq, d2_seq;
    double h = opt.h0;
    for (int level = 0; level < opt.points; ++level, h /= 2.0) {
        Vec plus = c(t0 + h);
        Vec minus = c(t0 - h);
        Vec d1(dim), d2(dim);
        for (int i = 0; i < dim; ++i) {
            d1[i] = (plus[i] - minus[i]) / (2.0 * h);
            d2[i] = (plus[i] - 2.0 * center[i] + minus[i]) / (h * h);
        }
        d1_seq.push_back(std::move(d1));
        d2_seq.push_back(std::move(d2));
    }

    // central differences: error = a*h^2 + b*h^4 + ...
    ExtrapolatedVec first = richardson_vec(d1_seq, 2.0, 2.0, 2.0, opt.max_levels);
    ExtrapolatedVec second = richardson_vec(d2_seq, 2.0, 2.0, 2.0, opt.max_levels);

    // Residual contraction check: successive halvings must shrink the raw
    // difference-quotient spread (divergent spreads mean the sample is not C2
    // at this point; extrapolating such a sequence produces garbage).
    auto check_contraction = [&](const std::vector<Vec>& seq, const char* what) {
        auto spread = [&](std::size_t i) {
            double s = 0.0;
            for (int c = 0; c < dim; ++c)
                s = std::max(s, std::abs(seq[i][std::size_t(c)] - seq[i - 1][std::size_t(c)]));
            return s;
        };
        double head = spread(1);
        double tail = spread(seq.size() - 1);
        if (head > 1e-9 && tail > 0.9 * head)
            throw NonSmoothSample(std::string("finite-difference residuals fail to contract (") +
                                  what + ")");
    };
    if (opt.points >= 3) {
        check_contraction(d1_seq, "first derivative");
        check_contraction(d2_seq, "second derivative");
    }

    CurveDerivatives d;
    d.value = std::move(center);
    d.first = std::move(first.value);
    d.second = std::move(second.value);
    d.error_first = first.error;
    d.error_second = second.error;
    d.base_order = 2;
    d.levels = opt.max_levels < 0 ? opt.points - 1 : opt.max_levels;
    return d;
}

}  // namespace osc
