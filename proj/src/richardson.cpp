#include "osculate/richardson.hpp"

#include <cmath>
#include <limits>

namespace osc {

std::vector<double> DyadicGrid::steps() const {
    std::vector<double> ts;
    for (int k = k_min; k <= k_max; ++k) ts.push_back(std::ldexp(1.0, -k));
    return ts;
}

Extrapolated richardson(const std::vector<double>& seq, double ratio, double p0, double pstep,
                        int max_levels) {
    if (seq.empty()) throw DimensionMismatch("richardson on empty sequence");
    int n = int(seq.size());
    int cols = n - 1;
    if (max_levels >= 0 && max_levels < cols) cols = max_levels;

    std::vector<std::vector<double>> table{std::size_t(n)};
    for (int i = 0; i < n; ++i) table[i] = {seq[i]};

    Extrapolated best{seq.back(), std::numeric_limits<double>::infinity(), 0};
    if (n >= 2) best.error = std::abs(seq[n - 1] - seq[n - 2]);

    for (int j = 1; j <= cols; ++j) {
        double factor = std::pow(ratio, p0 + (j - 1) * pstep) - 1.0;
        for (int i = 0; i + j < n; ++i) {
            double fine = table[i + 1][j - 1];
            double corrected = fine + (fine - table[i][j - 1]) / factor;
            table[i].push_back(corrected);
            double correction = std::abs(corrected - fine);
            if (correction <= best.error) best = {corrected, correction, j};
        }
    }
    return best;
}

ExtrapolatedVec richardson_vec(const std::vector<Vec>& seq, double ratio, double p0, double pstep,
                               int max_levels) {
    if (seq.empty()) throw DimensionMismatch("richardson on empty sequence");
    std::size_t dim = seq.front().size();
    ExtrapolatedVec out;
    out.value.resize(dim);
    for (std::size_t c = 0; c < dim; ++c) {
        std::vector<double> comp(seq.size());
        for (std::size_t i = 0; i < seq.size(); ++i) comp[i] = seq[i][c];
        Extrapolated e = richardson(comp, ratio, p0, pstep, max_levels);
        out.value[c] = e.value;
        out.error = std::max(out.error, e.error);
    }
    return out;
}

SlopeFit fit_loglog_slope(const std::vector<double>& ts, const std::vector<double>& errs,
                          double floor) {
    if (ts.size() != errs.size()) throw DimensionMismatch("slope fit size mismatch");
    SlopeFit fit;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        fit.max_residual = std::max(fit.max_residual, errs[i]);
        if (errs[i] > floor) {
            xs.push_back(std::log(ts[i]));
            ys.push_back(std::log(errs[i]));
        }
    }
    if (xs.size() < 3) {
        fit.at_noise_floor = true;
        fit.slope = std::numeric_limits<double>::infinity();
        return fit;
    }
    double n = double(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return fit;
}

}  // namespace osc
