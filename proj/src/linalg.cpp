#include "osculate/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace osc {

namespace {

void check_same_size(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector size mismatch");
}

}  // namespace

Vec add(const Vec& a, const Vec& b) {
    check_same_size(a, b);
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Vec sub(const Vec& a, const Vec& b) {
    check_same_size(a, b);
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Vec scaled(const Vec& a, double s) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
    return out;
}

double dot(const Vec& a, const Vec& b) {
    check_same_size(a, b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec basis_vector(int n, int i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    return e;
}

Vec concat(const Vec& a, const Vec& b) {
    Vec out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

bool all_finite(const Vec& a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::from_columns(const std::vector<Vec>& cols) {
    if (cols.empty()) return {};
    Mat m(int(cols.front().size()), int(cols.size()));
    for (int j = 0; j < m.cols(); ++j) {
        if (int(cols[j].size()) != m.rows()) throw DimensionMismatch("ragged columns");
        for (int i = 0; i < m.rows(); ++i) m(i, j) = cols[j][i];
    }
    return m;
}

Vec Mat::apply(const Vec& v) const {
    if (int(v.size()) != cols_) throw DimensionMismatch("matrix-vector size mismatch");
    Vec out(rows_, 0.0);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
}

Mat Mat::mul(const Mat& rhs) const {
    if (cols_ != rhs.rows_) throw DimensionMismatch("matrix-matrix size mismatch");
    Mat out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            double aik = (*this)(i, k);
            for (int j = 0; j < rhs.cols_; ++j) out(i, j) += aik * rhs(k, j);
        }
    return out;
}

Mat Mat::transposed() const {
    Mat out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

Vec Mat::column(int j) const {
    Vec out(rows_);
    for (int i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

Vec solve(const Mat& a, const Vec& b) {
    if (a.rows() != a.cols() || a.rows() != int(b.size()))
        throw DimensionMismatch("solve expects a square system");
    int n = a.rows();
    std::vector<double> lu(std::size_t(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) lu[std::size_t(i) * n + j] = a(i, j);
    std::vector<double> rhs = b;
    lu_solve_inplace(lu, n, rhs, 1);
    return rhs;
}

Mat inverse(const Mat& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("inverse expects a square matrix");
    int n = a.rows();
    std::vector<double> lu(std::size_t(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) lu[std::size_t(i) * n + j] = a(i, j);
    std::vector<double> rhs(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) rhs[std::size_t(i) * n + i] = 1.0;
    lu_solve_inplace(lu, n, rhs, n);
    Mat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = rhs[std::size_t(i) * n + j];
    return out;
}

namespace {

double norm1(const Mat& a) {
    double best = 0.0;
    for (int j = 0; j < a.cols(); ++j) {
        double col = 0.0;
        for (int i = 0; i < a.rows(); ++i) col += std::abs(a(i, j));
        best = std::max(best, col);
    }
    return best;
}

}  // namespace

double condition_number(const Mat& a) {
    try {
        return norm1(a) * norm1(inverse(a));
    } catch (const DegenerateFrame&) {
        return std::numeric_limits<double>::infinity();
    }
}

int numerical_rank(Mat a, double tol) {
    int rank = 0;
    int rows = a.rows(), cols = a.cols();
    int row = 0;
    for (int col = 0; col < cols && row < rows; ++col) {
        int piv = row;
        for (int r = row + 1; r < rows; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) <= tol) continue;
        for (int j = 0; j < cols; ++j) std::swap(a(row, j), a(piv, j));
        for (int r = 0; r < rows; ++r) {
            if (r == row) continue;
            double f = a(r, col) / a(row, col);
            for (int j = 0; j < cols; ++j) a(r, j) -= f * a(row, j);
        }
        ++rank;
        ++row;
    }
    return rank;
}

}  // namespace osc
