#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "osculate/errors.hpp"

namespace osc {

using Vec = std::vector<double>;

constexpr double primal(double x) { return x; }

// -- dense vectors (n <= ~12 throughout) -------------------------------------

Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scaled(const Vec& a, double s);
double dot(const Vec& a, const Vec& b);
double norm_inf(const Vec& a);
double norm2(const Vec& a);
Vec basis_vector(int n, int i);
Vec concat(const Vec& a, const Vec& b);
bool all_finite(const Vec& a);

/// Dense row-major matrix.
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), d_(std::size_t(rows) * cols, 0.0) {}

    static Mat identity(int n);
    static Mat from_columns(const std::vector<Vec>& cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return d_[std::size_t(i) * cols_ + j]; }
    double operator()(int i, int j) const { return d_[std::size_t(i) * cols_ + j]; }

    Vec apply(const Vec& v) const;  // M v
    Mat mul(const Mat& rhs) const;
    Mat transposed() const;
    Vec column(int j) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> d_;
};

/// Solves A x = b by partial-pivot LU. Throws DegenerateFrame on singular A.
Vec solve(const Mat& a, const Vec& b);
Mat inverse(const Mat& a);

/// 1-norm condition number ||A||_1 ||A^-1||_1; +inf when singular.
double condition_number(const Mat& a);

/// Numerical rank with absolute pivot tolerance (row echelon).
int numerical_rank(Mat a, double tol);

// -- generic square solve (used with jet-valued scalars) ----------------------

/// In-place partial-pivot LU solve of an n x n system over any scalar type
/// providing +,-,*,/ and primal(). B holds ncols right-hand sides, row-major.
template <class S>
void lu_solve_inplace(std::vector<S>& a, int n, std::vector<S>& b, int ncols) {
    auto at = [&](std::vector<S>& m, int i, int j, int stride) -> S& {
        return m[std::size_t(i) * stride + j];
    };
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(primal(at(a, col, col, n)));
        for (int r = col + 1; r < n; ++r) {
            double cand = std::abs(primal(at(a, r, col, n)));
            if (cand > best) {
                best = cand;
                piv = r;
            }
        }
        if (!(best > 0.0)) throw DegenerateFrame("singular matrix in lu_solve");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(at(a, col, j, n), at(a, piv, j, n));
            for (int j = 0; j < ncols; ++j) std::swap(at(b, col, j, ncols), at(b, piv, j, ncols));
        }
        for (int r = col + 1; r < n; ++r) {
            S f = at(a, r, col, n) / at(a, col, col, n);
            for (int j = col; j < n; ++j) at(a, r, j, n) = at(a, r, j, n) - f * at(a, col, j, n);
            for (int j = 0; j < ncols; ++j)
                at(b, r, j, ncols) = at(b, r, j, ncols) - f * at(b, col, j, ncols);
        }
    }
    for (int row = n - 1; row >= 0; --row) {
        for (int j = 0; j < ncols; ++j) {
            S acc = at(b, row, j, ncols);
            for (int k = row + 1; k < n; ++k) acc = acc - at(a, row, k, n) * at(b, k, j, ncols);
            at(b, row, j, ncols) = acc / at(a, row, row, n);
        }
    }
}

}  // namespace osc
