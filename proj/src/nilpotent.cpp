#include "osculate/nilpotent.hpp"

#include <algorithm>
#include <cmath>

namespace osc {

BilinearMap BilinearMap::skew_part() const {
    BilinearMap out(p_, q_);
    for (int k = 0; k < q_; ++k)
        for (int i = 0; i < p_; ++i)
            for (int j = 0; j < p_; ++j)
                out.coeff(k, i, j) = 0.5 * (coeff(k, i, j) - coeff(k, j, i));
    return out;
}

BilinearMap BilinearMap::symmetric_part() const {
    BilinearMap out(p_, q_);
    for (int k = 0; k < q_; ++k)
        for (int i = 0; i < p_; ++i)
            for (int j = 0; j < p_; ++j)
                out.coeff(k, i, j) = 0.5 * (coeff(k, i, j) + coeff(k, j, i));
    return out;
}

double BilinearMap::max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

bool BilinearMap::same_skew_part(const BilinearMap& other, double tol) const {
    if (p_ != other.p_ || q_ != other.q_) return false;
    // B - C symmetric <=> equal skew parts
    for (int k = 0; k < q_; ++k)
        for (int i = 0; i < p_; ++i)
            for (int j = 0; j < p_; ++j) {
                double d = (coeff(k, i, j) - other.coeff(k, i, j)) -
                           (coeff(k, j, i) - other.coeff(k, j, i));
                if (std::abs(d) > tol) return false;
            }
    return true;
}

Mat BilinearMap::skew_stack() const {
    BilinearMap s = skew_part();
    Mat m(q_ * p_, p_);
    for (int k = 0; k < q_; ++k)
        for (int i = 0; i < p_; ++i)
            for (int j = 0; j < p_; ++j) m(k * p_ + i, j) = s.coeff(k, i, j);
    return m;
}

namespace {

void check_dims(const BilinearMap& b, const GroupElement& g) {
    if (int(g.h.size()) != b.p() || int(g.n.size()) != b.q())
        throw DimensionMismatch("group element does not match bilinear map dimensions");
}

}  // namespace

GroupElement gb_identity(const BilinearMap& b) {
    return {Vec(b.p(), 0.0), Vec(b.q(), 0.0)};
}

GroupElement gb_mul(const BilinearMap& b, const GroupElement& lhs, const GroupElement& rhs) {
    check_dims(b, lhs);
    check_dims(b, rhs);
    return {add(lhs.h, rhs.h), add(add(lhs.n, rhs.n), b.apply(lhs.h, rhs.h))};
}

GroupElement gb_inv(const BilinearMap& b, const GroupElement& g) {
    check_dims(b, g);
    return {scaled(g.h, -1.0), add(scaled(g.n, -1.0), b.apply(g.h, g.h))};
}

GroupElement gb_commutator(const BilinearMap& b, const GroupElement& lhs,
                           const GroupElement& rhs) {
    // a b a^-1 b^-1 = (0, B(h1,h2) - B(h2,h1)); the closed form keeps the
    // h-part an exact zero, so iterated commutators vanish identically.
    check_dims(b, lhs);
    check_dims(b, rhs);
    return {Vec(lhs.h.size(), 0.0), sub(b.apply(lhs.h, rhs.h), b.apply(rhs.h, lhs.h))};
}

GroupElement gb_exp(const BilinearMap& b, const AlgebraElement& x) {
    check_dims(b, x);
    return {x.h, add(x.n, scaled(b.apply(x.h, x.h), 0.5))};
}

AlgebraElement gb_log(const BilinearMap& b, const GroupElement& g) {
    check_dims(b, g);
    return {g.h, sub(g.n, scaled(b.apply(g.h, g.h), 0.5))};
}

AlgebraElement gb_bracket(const BilinearMap& b, const AlgebraElement& x,
                          const AlgebraElement& y) {
    check_dims(b, x);
    check_dims(b, y);
    return {Vec(x.h.size(), 0.0), sub(b.apply(x.h, y.h), b.apply(y.h, x.h))};
}

GroupElement gb_dilate(const GroupElement& g, double s) {
    if (!(s > 0.0)) throw NonpositiveScale("dilation scale must be positive");
    return {scaled(g.h, s), scaled(g.n, s * s)};
}

AlgebraElement algebra_dilate(const AlgebraElement& x, double s) {
    if (!(s > 0.0)) throw NonpositiveScale("dilation scale must be positive");
    return {scaled(x.h, s), scaled(x.n, s * s)};
}

QuadraticIso::QuadraticIso(BilinearMap target_b, BilinearMap source_c)
    : b_(std::move(target_b)), c_(std::move(source_c)) {}

GroupElement QuadraticIso::operator()(const GroupElement& g) const {
    Vec shift = sub(scaled(b_.apply(g.h, g.h), 0.5), scaled(c_.apply(g.h, g.h), 0.5));
    return {g.h, add(g.n, shift)};
}

QuadraticIso gb_iso_phi(const BilinearMap& b, const BilinearMap& c) {
    if (!b.same_skew_part(c))
        throw SkewPartMismatch("bilinear maps differ in their skew-symmetric parts");
    return {b, c};
}

double element_distance(const GroupElement& a, const GroupElement& b) {
    return std::max(norm_inf(sub(a.h, b.h)), norm_inf(sub(a.n, b.n)));
}

}  // namespace osc
