#pragma once

#include <functional>
#include <vector>

#include "osculate/jet.hpp"
#include "osculate/linalg.hpp"
#include "osculate/richardson.hpp"

namespace osc {

/// Value, Jacobian and per-output Hessians of a map R^n -> R^m at a point.
struct MapDerivatives {
    Vec value;
    Mat jacobian;              // m x n
    std::vector<Mat> hessian;  // one symmetric n x n slice per output
};

using JetMap = std::function<std::vector<Jet2>(const std::vector<Jet2>&)>;
using Jet1Map = std::function<std::vector<Jet1>(const std::vector<Jet1>&)>;

/// One seeded second-order pass; every Hessian slice is symmetric by storage.
MapDerivatives map_jet2(const JetMap& f, const Vec& point);

struct MapJacobian {
    Vec value;
    Mat jacobian;
};

MapJacobian map_jet1(const Jet1Map& f, const Vec& point);

/// c(t0), c'(t0), c''(t0) of a curve R -> R^n.
struct CurveDerivatives {
    Vec value;
    Vec first;
    Vec second;
    double error_first = 0.0;   // extrapolation error estimate (0 on the jet path)
    double error_second = 0.0;
    int base_order = 0;         // finite-difference base order (0 on the jet path)
    int levels = 0;             // Richardson levels actually used
};

using JetCurve = std::function<std::vector<Jet2>(const Jet2&)>;

/// Exact derivatives through second-order jet arithmetic.
CurveDerivatives curve_jet2(const JetCurve& c, double t0);

/// Central-difference settings for black-box samplers.
struct SamplerOptions {
    double h0 = 1e-2;    // largest step
    int points = 4;      // step-halving levels sampled
    int max_levels = -1; // Richardson column cap (-1: full table)
};

/// Richardson options matching the dyadic probe grids.
SamplerOptions dyadic_sampler_options(const DyadicGrid& grid = {}, int max_levels = 3);

/// Black-box fallback: central differences with step halving. Throws
/// NonSmoothSample when the extrapolation residuals fail to contract.
CurveDerivatives curve_from_samples(const std::function<Vec(double)>& c, double t0,
                                    const SamplerOptions& opt = {});

}  // namespace osc
