#pragma once

#include <string>
#include <vector>

#include "osculate/expmaps.hpp"
#include "osculate/report.hpp"

namespace osc {

struct SuiteOptions {
    std::vector<Vec> points;                                // default: origin
    std::vector<std::string> handles = {"fs", "conn", "autochart"};
    int samples = 50;
    std::uint64_t seed = 0;
    DyadicGrid grid;
    IntegratorSettings integrator;
};

struct SuiteResult {
    Json checks = Json::array();
    bool pass = true;
};

/// Builds a handle by name: fs | conn | flat | autochart | translation |
/// broken | table:<name> (an expression connection from the geometry file).
ExpMapHandle make_handle(const Geometry& geom, const std::string& name,
                         const std::vector<Vec>& sample_points,
                         const IntegratorSettings& settings = {});

/// Runs one of the named verification suites:
///   group    - osculating group axioms, exp/log, BCH, dilations
///   oracle   - flow-integration oracles against the algebraic formulas
///   expmap   - H-adapted verification of the requested handles
///   groupoid - glueing-chart transitions, convergence, groupoid laws
///   all      - everything above
SuiteResult run_suite(const Geometry& geom, const std::string& suite, const SuiteOptions& opt);

}  // namespace osc
