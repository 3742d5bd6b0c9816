#include "osculate/jet.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace osc {

namespace {

constexpr double kDivGuard = std::numeric_limits<double>::min();

void require_zero_denominator_guard(double v) {
    if (std::abs(v) < kDivGuard) throw DivisionByZero("division by zero");
}

// Aligns the seed widths of a binary operand pair, promoting constants.
template <class J>
std::pair<J, J> broadcast(const J& a, const J& b) {
    if (a.is_constant() && !b.is_constant()) return {J::constant(a.value(), b.vars()), b};
    if (b.is_constant() && !a.is_constant()) return {a, J::constant(b.value(), a.vars())};
    if (a.vars() != b.vars()) throw DimensionMismatch("jet seed-width mismatch");
    return {a, b};
}

}  // namespace

// -- Jet1 ---------------------------------------------------------------------

std::vector<Jet1> Jet1::seed(const Vec& values) {
    std::vector<Jet1> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out.emplace_back(values[i], basis_vector(int(values.size()), int(i)));
    return out;
}

Jet1 operator-(const Jet1& x) { return {-x.v_, scaled(x.g_, -1.0)}; }

Jet1 operator+(const Jet1& a, const Jet1& b) {
    auto [x, y] = broadcast(a, b);
    if (x.is_constant()) return {x.v_ + y.v_};
    return {x.v_ + y.v_, add(x.g_, y.g_)};
}

Jet1 operator-(const Jet1& a, const Jet1& b) {
    auto [x, y] = broadcast(a, b);
    if (x.is_constant()) return {x.v_ - y.v_};
    return {x.v_ - y.v_, sub(x.g_, y.g_)};
}

Jet1 operator*(const Jet1& a, const Jet1& b) {
    auto [x, y] = broadcast(a, b);
    if (x.is_constant()) return {x.v_ * y.v_};
    // (uv)' = u'v + uv'
    Vec g(x.g_.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = x.g_[i] * y.v_ + x.v_ * y.g_[i];
    return {x.v_ * y.v_, std::move(g)};
}

Jet1 operator/(const Jet1& a, const Jet1& b) { return checked_div(a, b); }

Jet1 Jet1::compose(double f0, double f1) const {
    if (is_constant()) return {f0};
    return {f0, scaled(g_, f1)};
}

Jet1 sin(const Jet1& x) { return x.compose(std::sin(x.value()), std::cos(x.value())); }
Jet1 cos(const Jet1& x) { return x.compose(std::cos(x.value()), -std::sin(x.value())); }
Jet1 exp(const Jet1& x) {
    double e = std::exp(x.value());
    return x.compose(e, e);
}

// -- Jet2 ---------------------------------------------------------------------

Jet2::Jet2(double v, Vec grad, Vec hess_packed)
    : v_(v), g_(std::move(grad)), h_(std::move(hess_packed)) {
    if (h_.size() != g_.size() * (g_.size() + 1) / 2)
        throw DimensionMismatch("packed hessian size mismatch");
}

Jet2 Jet2::constant(double v, int nvars) {
    return {v, Vec(nvars, 0.0), Vec(std::size_t(nvars) * (nvars + 1) / 2, 0.0)};
}

std::vector<Jet2> Jet2::seed(const Vec& values) {
    int n = int(values.size());
    std::vector<Jet2> out;
    out.reserve(values.size());
    for (int i = 0; i < n; ++i)
        out.emplace_back(values[i], basis_vector(n, i), Vec(std::size_t(n) * (n + 1) / 2, 0.0));
    return out;
}

double Jet2::hess(int i, int j) const {
    if (is_constant()) return 0.0;
    return i <= j ? h_[hidx(i, j)] : h_[hidx(j, i)];
}

Mat Jet2::hess_matrix() const {
    int n = vars();
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = hess(i, j);
    return m;
}

Jet2 operator-(const Jet2& x) { return {-x.v_, scaled(x.g_, -1.0), scaled(x.h_, -1.0)}; }

Jet2 operator+(const Jet2& a, const Jet2& b) {
    auto [x, y] = broadcast(a, b);
    if (x.is_constant()) return {x.v_ + y.v_};
    return {x.v_ + y.v_, add(x.g_, y.g_), add(x.h_, y.h_)};
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
    auto [x, y] = broadcast(a, b);
    if (x.is_constant()) return {x.v_ - y.v_};
    return {x.v_ - y.v_, sub(x.g_, y.g_), sub(x.h_, y.h_)};
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
    auto [x, y] = broadcast(a, b);
    if (x.is_constant()) return {x.v_ * y.v_};
    int n = x.vars();
    Vec g(std::size_t(n), 0.0);
    for (int i = 0; i < n; ++i) g[i] = x.g_[i] * y.v_ + x.v_ * y.g_[i];
    // (uv)'' = u''v + u'v'^T + v'u'^T + uv''
    Vec h(x.h_.size());
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++idx)
            h[idx] = x.h_[idx] * y.v_ + x.v_ * y.h_[idx] + x.g_[i] * y.g_[j] + x.g_[j] * y.g_[i];
    return {x.v_ * y.v_, std::move(g), std::move(h)};
}

Jet2 operator/(const Jet2& a, const Jet2& b) { return checked_div(a, b); }

Jet2 Jet2::compose(double f0, double f1, double f2) const {
    if (is_constant()) return {f0};
    int n = vars();
    Vec h(h_.size());
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++idx) h[idx] = f1 * h_[idx] + f2 * g_[i] * g_[j];
    return {f0, scaled(g_, f1), std::move(h)};
}

Jet2 sin(const Jet2& x) {
    double s = std::sin(x.value()), c = std::cos(x.value());
    return x.compose(s, c, -s);
}

Jet2 cos(const Jet2& x) {
    double s = std::sin(x.value()), c = std::cos(x.value());
    return x.compose(c, -s, -c);
}

Jet2 exp(const Jet2& x) {
    double e = std::exp(x.value());
    return x.compose(e, e, e);
}

// -- shared scalar pieces -------------------------------------------------------

double checked_div(double a, double b) {
    require_zero_denominator_guard(b);
    return a / b;
}

// Quotients keep the correctly rounded a/b as their value so that plain-real
// evaluation and jet evaluation agree bit for bit.
Jet1 checked_div(const Jet1& a, const Jet1& b) {
    require_zero_denominator_guard(b.value());
    double v = a.value() / b.value();
    auto [x, y] = broadcast(a, b);
    if (x.is_constant()) return {v};
    int n = x.vars();
    Vec g(std::size_t(n), 0.0);
    for (int i = 0; i < n; ++i)
        g[std::size_t(i)] = (x.grad()[std::size_t(i)] - v * y.grad()[std::size_t(i)]) / y.value();
    return {v, std::move(g)};
}

Jet2 checked_div(const Jet2& a, const Jet2& b) {
    require_zero_denominator_guard(b.value());
    double v = a.value() / b.value();
    auto [x, y] = broadcast(a, b);
    if (x.is_constant()) return {v};
    int n = x.vars();
    Vec g(std::size_t(n), 0.0);
    for (int i = 0; i < n; ++i)
        g[std::size_t(i)] = (x.grad()[std::size_t(i)] - v * y.grad()[std::size_t(i)]) / y.value();
    // from a = q b: H_q = (H_a - q H_b - g_q g_b^T - g_b g_q^T) / b
    Vec h(std::size_t(n) * (n + 1) / 2, 0.0);
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++idx)
            h[idx] = (x.hess(i, j) - v * y.hess(i, j) - g[std::size_t(i)] * y.grad()[std::size_t(j)] -
                      y.grad()[std::size_t(i)] * g[std::size_t(j)]) /
                     y.value();
    return {v, std::move(g), std::move(h)};
}

double pow_int(double x, int k) {
    if (k < 0) {
        require_zero_denominator_guard(x);
        return 1.0 / pow_int(x, -k);
    }
    double acc = 1.0, base = x;
    for (int e = k; e > 0; e >>= 1) {
        if (e & 1) acc *= base;
        base *= base;
    }
    return acc;
}

namespace {

// v^k, k*v^(k-1), k*(k-1)*v^(k-2) with exact handling of v == 0.
void pow_int_derivatives(double v, int k, double& f0, double& f1, double& f2) {
    if (k < 0 && std::abs(v) < kDivGuard) throw DivisionByZero("0 raised to a negative power");
    f0 = pow_int(v, k);
    f1 = (k == 0) ? 0.0 : double(k) * pow_int(v, k - 1);
    f2 = (k == 0 || k == 1) ? 0.0 : double(k) * double(k - 1) * pow_int(v, k - 2);
}

}  // namespace

Jet1 pow_int(const Jet1& x, int k) {
    double f0, f1, f2;
    pow_int_derivatives(x.value(), k, f0, f1, f2);
    return x.compose(f0, f1);
}

Jet2 pow_int(const Jet2& x, int k) {
    double f0, f1, f2;
    pow_int_derivatives(x.value(), k, f0, f1, f2);
    return x.compose(f0, f1, f2);
}

}  // namespace osc
