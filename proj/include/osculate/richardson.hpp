#pragma once

#include <vector>

#include "osculate/linalg.hpp"

namespace osc {

/// Dyadic step grid 2^-k_min .. 2^-k_max, largest step first.
struct DyadicGrid {
    int k_min = 3;
    int k_max = 10;
    std::vector<double> steps() const;
};

struct Extrapolated {
    double value = 0.0;
    double error = 0.0;  // size of the last accepted correction
    int levels = 0;      // extrapolation columns actually used
};

/// Richardson extrapolation of seq[i] = A(h0 / ratio^i) (largest step first),
/// assuming error orders p0, p0+pstep, p0+2*pstep, ... Picks the table entry
/// with the smallest correction, so rounding takeover stops the recursion.
Extrapolated richardson(const std::vector<double>& seq, double ratio, double p0, double pstep,
                        int max_levels = -1);

struct ExtrapolatedVec {
    Vec value;
    double error = 0.0;
};

ExtrapolatedVec richardson_vec(const std::vector<Vec>& seq, double ratio, double p0, double pstep,
                               int max_levels = -1);

struct SlopeFit {
    double slope = 0.0;
    bool at_noise_floor = false;  // residuals too small for a meaningful fit
    double max_residual = 0.0;
};

/// Least-squares slope of log(err) against log(t). Points at or below the
/// floor are excluded; when fewer than three remain the data is treated as
/// numerically zero and the fit reports at_noise_floor.
SlopeFit fit_loglog_slope(const std::vector<double>& ts, const std::vector<double>& errs,
                          double floor = 1e-12);

}  // namespace osc
