#pragma once

#include <doctest.h>

#include <string>

#include "osculate/config.hpp"
#include "osculate/geometry.hpp"
#include "osculate/nilpotent.hpp"

#ifndef OSC_GEOMS_DIR
#define OSC_GEOMS_DIR "geoms"
#endif

namespace osc::test {

inline std::string fixture(const std::string& name) {
    return std::string(OSC_GEOMS_DIR) + "/" + name;
}

inline Geometry load_fixture(const std::string& name) {
    return Geometry(load_geometry(fixture(name)));
}

/// Heisenberg b-tensor: b(e1,e2) = -1/2, b(e2,e1) = +1/2.
inline BilinearMap heis_b() {
    BilinearMap b(2, 1);
    b.coeff(0, 0, 1) = -0.5;
    b.coeff(0, 1, 0) = 0.5;
    return b;
}

/// Polarized b-tensor: b(e2,e1) = 1 only.
inline BilinearMap polarized_b() {
    BilinearMap b(2, 1);
    b.coeff(0, 1, 0) = 1.0;
    return b;
}

inline GroupElement el(Vec h, Vec n) { return {std::move(h), std::move(n)}; }

inline void check_element(const GroupElement& got, const GroupElement& want, double tol = 1e-12) {
    REQUIRE(got.h.size() == want.h.size());
    REQUIRE(got.n.size() == want.n.size());
    CHECK(element_distance(got, want) <= tol);
}

inline void check_vec(const Vec& got, const Vec& want, double tol = 1e-12) {
    REQUIRE(got.size() == want.size());
    CHECK(norm_inf(sub(got, want)) <= tol);
}

}  // namespace osc::test
