#include "lmnet/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace lmnet {

namespace {

bool finite_range(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), elems_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> elements)
    : rows_(rows), cols_(cols), elems_(std::move(elements)) {
    if (elems_.size() != rows_ * cols_)
        throw std::invalid_argument("DenseMatrix: element count does not match rows*cols");
    if (!finite_range(elems_))
        throw std::invalid_argument("DenseMatrix: non-finite element");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::initializer_list<double> elements)
    : DenseMatrix(rows, cols, std::vector<double>(elements)) {}

bool DenseMatrix::all_finite() const { return finite_range(elems_); }

DenseVector::DenseVector(std::size_t len) : elems_(len, 0.0) {}

DenseVector::DenseVector(std::vector<double> values) : elems_(std::move(values)) {
    if (!finite_range(elems_))
        throw std::invalid_argument("DenseVector: non-finite element");
}

DenseVector::DenseVector(std::initializer_list<double> values)
    : DenseVector(std::vector<double>(values)) {}

DenseVector DenseVector::unchecked(std::vector<double> values) {
    DenseVector v;
    v.elems_ = std::move(values);
    return v;
}

bool DenseVector::all_finite() const { return finite_range(elems_); }

double DenseVector::norm2() const {
    double s = 0.0;
    for (double x : elems_) s += x * x;
    return std::sqrt(s);
}

double DenseVector::norm_inf() const {
    double m = 0.0;
    for (double x : elems_) m = std::max(m, std::fabs(x));
    return m;
}

bool operator==(const DenseVector& a, const DenseVector& b) {
    return a.elements() == b.elements();
}

DenseMatrix gram(const DenseMatrix& j) {
    if (j.rows() == 0 || j.cols() == 0)
        throw std::invalid_argument("gram: matrix must have at least one row and column");
    const std::size_t n = j.cols();
    DenseMatrix g(n, n);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p; q < n; ++q) {
            double s = 0.0;
            for (std::size_t i = 0; i < j.rows(); ++i) s += j(i, p) * j(i, q);
            g(p, q) = s;
            g(q, p) = s;
        }
    }
    return g;
}

DenseVector mul_transpose_vec(const DenseMatrix& j, const DenseVector& r) {
    if (r.size() != j.rows())
        throw std::invalid_argument("mul_transpose_vec: vector length does not match row count");
    DenseVector out(j.cols());
    for (std::size_t i = 0; i < j.rows(); ++i) {
        const double ri = r[i];
        for (std::size_t p = 0; p < j.cols(); ++p) out[p] += j(i, p) * ri;
    }
    return out;
}

DenseVector solve_spd(const DenseMatrix& a, const DenseVector& b) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("solve_spd: matrix must be square");
    if (b.size() != n) throw std::invalid_argument("solve_spd: right-hand side length mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            const double d = std::fabs(a(i, k) - a(k, i));
            const double scale = std::max({1.0, std::fabs(a(i, k)), std::fabs(a(k, i))});
            if (!(d <= 1e-10 * scale))
                throw std::invalid_argument("solve_spd: matrix is not symmetric");
        }
    }

    // LDL^T, no square roots. Unit lower triangle in `lower`, pivots in `diag`.
    std::vector<double> lower(n * n, 0.0);
    std::vector<double> diag(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double dj = a(j, j);
        for (std::size_t k = 0; k < j; ++k) dj -= lower[j * n + k] * lower[j * n + k] * diag[k];
        if (!(dj > 0.0)) throw IndefiniteSystemError("solve_spd: non-positive pivot");
        diag[j] = dj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= lower[i * n + k] * lower[j * n + k] * diag[k];
            lower[i * n + j] = v / dj;
        }
    }

    // L z = b, then D w = z, then L^T x = w.
    std::vector<double> x(b.elements());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < i; ++k) x[i] -= lower[i * n + k] * x[k];
    for (std::size_t i = 0; i < n; ++i) x[i] /= diag[i];
    for (std::size_t ii = n; ii-- > 0;)
        for (std::size_t k = ii + 1; k < n; ++k) x[ii] -= lower[k * n + ii] * x[k];
    return DenseVector::unchecked(std::move(x));
}

}  // namespace lmnet
