#pragma once

#include <cmath>
#include <vector>

#include "osculate/errors.hpp"
#include "osculate/linalg.hpp"

namespace osc {

/// Scalar with first-order derivative data against a set of seed variables.
/// Constants (empty grad) broadcast against any seed width.
class Jet1 {
public:
    Jet1() = default;
    Jet1(double v) : v_(v) {}  // NOLINT: implicit literal promotion
    Jet1(double v, Vec grad) : v_(v), g_(std::move(grad)) {}

    static Jet1 constant(double v, int nvars) { return {v, Vec(nvars, 0.0)}; }
    static std::vector<Jet1> seed(const Vec& values);

    double value() const { return v_; }
    const Vec& grad() const { return g_; }
    bool is_constant() const { return g_.empty(); }
    int vars() const { return int(g_.size()); }

    friend double primal(const Jet1& x) { return x.v_; }

    friend Jet1 operator-(const Jet1& x);
    friend Jet1 operator+(const Jet1& a, const Jet1& b);
    friend Jet1 operator-(const Jet1& a, const Jet1& b);
    friend Jet1 operator*(const Jet1& a, const Jet1& b);
    friend Jet1 operator/(const Jet1& a, const Jet1& b);

    /// f(x) for scalar f with derivative f1 at x.value().
    Jet1 compose(double f0, double f1) const;

private:
    double v_ = 0.0;
    Vec g_;
};

Jet1 sin(const Jet1& x);
Jet1 cos(const Jet1& x);
Jet1 exp(const Jet1& x);
Jet1 pow_int(const Jet1& x, int k);

/// Scalar with exact first- and second-order derivative data. The Hessian is
/// stored as a packed upper triangle, so symmetry holds structurally.
class Jet2 {
public:
    Jet2() = default;
    Jet2(double v) : v_(v) {}  // NOLINT: implicit literal promotion
    Jet2(double v, Vec grad, Vec hess_packed);

    static Jet2 constant(double v, int nvars);
    static std::vector<Jet2> seed(const Vec& values);

    double value() const { return v_; }
    const Vec& grad() const { return g_; }
    bool is_constant() const { return g_.empty(); }
    int vars() const { return int(g_.size()); }

    double hess(int i, int j) const;
    Mat hess_matrix() const;

    friend double primal(const Jet2& x) { return x.v_; }

    friend Jet2 operator-(const Jet2& x);
    friend Jet2 operator+(const Jet2& a, const Jet2& b);
    friend Jet2 operator-(const Jet2& a, const Jet2& b);
    friend Jet2 operator*(const Jet2& a, const Jet2& b);
    friend Jet2 operator/(const Jet2& a, const Jet2& b);

    /// f(x) for scalar f with derivatives f1, f2 at x.value():
    /// grad = f1*dx, hess = f1*Hx + f2*dx dx^T.
    Jet2 compose(double f0, double f1, double f2) const;

private:
    // packed index for i <= j
    std::size_t hidx(int i, int j) const {
        return std::size_t(i) * g_.size() - std::size_t(i) * (i - 1) / 2 + std::size_t(j - i);
    }

    double v_ = 0.0;
    Vec g_;
    Vec h_;  // size n(n+1)/2
};

Jet2 sin(const Jet2& x);
Jet2 cos(const Jet2& x);
Jet2 exp(const Jet2& x);
Jet2 pow_int(const Jet2& x, int k);

// Division with the shared zero-denominator guard; the double overload keeps
// generic expression evaluation uniform across scalar types.
double checked_div(double a, double b);
Jet1 checked_div(const Jet1& a, const Jet1& b);
Jet2 checked_div(const Jet2& a, const Jet2& b);

double pow_int(double x, int k);

}  // namespace osc
