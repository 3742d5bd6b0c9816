#pragma once

#include <vector>

#include "osculate/errors.hpp"
#include "osculate/linalg.hpp"

namespace osc {

/// Bilinear map B : R^p x R^p -> R^q stored as the coefficient tensor
/// B_{ij}^k, so B(v,w)^k = sum_ij B_{ij}^k v_i w_j.
class BilinearMap {
public:
    BilinearMap() = default;
    BilinearMap(int p, int q) : p_(p), q_(q), coeffs_(std::size_t(q) * p * p, 0.0) {}

    int p() const { return p_; }
    int q() const { return q_; }

    double& coeff(int k, int i, int j) { return coeffs_[index(k, i, j)]; }
    double coeff(int k, int i, int j) const { return coeffs_[index(k, i, j)]; }

    template <class S>
    std::vector<S> apply(const std::vector<S>& v, const std::vector<S>& w) const {
        if (int(v.size()) != p_ || int(w.size()) != p_)
            throw DimensionMismatch("bilinear-map argument size mismatch");
        std::vector<S> out(std::size_t(q_), S(0.0));
        for (int k = 0; k < q_; ++k)
            for (int i = 0; i < p_; ++i)
                for (int j = 0; j < p_; ++j)
                    out[k] = out[k] + S(coeff(k, i, j)) * v[i] * w[j];
        return out;
    }

    BilinearMap skew_part() const;       // (B - B^T)/2
    BilinearMap symmetric_part() const;  // (B + B^T)/2
    double max_abs_coeff() const;
    bool same_skew_part(const BilinearMap& other, double tol = 1e-12) const;

    /// Stacked skew slices as a (q p) x p matrix; its rank grades degeneracy.
    Mat skew_stack() const;

private:
    std::size_t index(int k, int i, int j) const {
        if (k < 0 || k >= q_ || i < 0 || i >= p_ || j < 0 || j >= p_)
            throw DimensionMismatch("bilinear-map index out of range");
        return (std::size_t(k) * p_ + i) * p_ + j;
    }

    int p_ = 0;
    int q_ = 0;
    Vec coeffs_;
};

/// Element (h, n) of G_B = R^p x R^q. Algebra elements share the container;
/// gb_exp / gb_log convert explicitly between the two readings.
struct GroupElement {
    Vec h;
    Vec n;
};

using AlgebraElement = GroupElement;

GroupElement gb_identity(const BilinearMap& b);

/// (h1,n1) * (h2,n2) = (h1+h2, n1+n2+B(h1,h2))
GroupElement gb_mul(const BilinearMap& b, const GroupElement& lhs, const GroupElement& rhs);

/// (h,n)^-1 = (-h, -n + B(h,h))
GroupElement gb_inv(const BilinearMap& b, const GroupElement& g);

/// a b a^-1 b^-1, computed by composition (central: (0, B(h1,h2)-B(h2,h1))).
GroupElement gb_commutator(const BilinearMap& b, const GroupElement& lhs,
                           const GroupElement& rhs);

/// exp(h,n) = (h, n + B(h,h)/2)
GroupElement gb_exp(const BilinearMap& b, const AlgebraElement& x);

/// log(h,n) = (h, n - B(h,h)/2)
AlgebraElement gb_log(const BilinearMap& b, const GroupElement& g);

/// [(h1,n1),(h2,n2)] = (0, B(h1,h2) - B(h2,h1))
AlgebraElement gb_bracket(const BilinearMap& b, const AlgebraElement& x, const AlgebraElement& y);

/// delta_s(h,n) = (s h, s^2 n), s > 0
GroupElement gb_dilate(const GroupElement& g, double s);
AlgebraElement algebra_dilate(const AlgebraElement& x, double s);

/// The quadratic isomorphism G_C -> G_B for maps with equal skew parts:
/// phi(h,n) = (h, n + B(h,h)/2 - C(h,h)/2).
class QuadraticIso {
public:
    QuadraticIso(BilinearMap target_b, BilinearMap source_c);
    GroupElement operator()(const GroupElement& g) const;

private:
    BilinearMap b_;
    BilinearMap c_;
};

QuadraticIso gb_iso_phi(const BilinearMap& b, const BilinearMap& c);

double element_distance(const GroupElement& a, const GroupElement& b);

}  // namespace osc
