#pragma once

#include <json.hpp>

#include "osculate/flows.hpp"
#include "osculate/geometry.hpp"
#include "osculate/groupoid.hpp"
#include "osculate/nilpotent.hpp"
#include "osculate/rng.hpp"

namespace osc {

using Json = nlohmann::json;

Json to_json(const BilinearMap& b);
Json to_json(const GroupElement& g);
Json to_json(const SlopeFit& fit);
Json to_json(const ProbeReport& report);
Json to_json(const VerifyReport& report);
Json to_json(const TransitionReport& report);
Json to_json(const ConvergenceReport& report);

BilinearMap bilinear_from_json(const Json& j);
GroupElement element_from_json(const Json& j);

/// Osculating-group description at a point: b-tensor, skew rank, isomorphism
/// hint, the frame bracket table and a few seeded group-law samples.
Json describe_report(const Geometry& geom, const Vec& point, Rng& rng);

/// Top-level report envelope ("schema": "osculate/1", timestamp, payload).
Json report_envelope(const std::string& command, Json payload);

/// t-grid CSV export (one row per grid point) for external plotting.
void write_probe_csv(const std::string& path, const ProbeReport& report);

}  // namespace osc
