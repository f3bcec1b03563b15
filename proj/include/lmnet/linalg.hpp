#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "lmnet/errors.hpp"

namespace lmnet {

/// Dense row-major matrix of doubles, indexed (row, column), 0-based.
/// Constructors taking explicit elements reject NaN/Inf; the zero-filled
/// constructor plus element writes is the path for computed values.
class DenseMatrix {
  public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> elements);
    DenseMatrix(std::size_t rows, std::size_t cols, std::initializer_list<double> elements);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return elems_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return elems_[i * cols_ + j]; }

    const std::vector<double>& elements() const { return elems_; }
    bool all_finite() const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> elems_;
};

class DenseVector {
  public:
    DenseVector() = default;
    explicit DenseVector(std::size_t len);
    explicit DenseVector(std::vector<double> values);
    DenseVector(std::initializer_list<double> values);

    /// Wraps computed values without the finiteness check.
    static DenseVector unchecked(std::vector<double> values);

    std::size_t size() const { return elems_.size(); }
    double operator[](std::size_t i) const { return elems_[i]; }
    double& operator[](std::size_t i) { return elems_[i]; }

    const std::vector<double>& elements() const { return elems_; }
    bool all_finite() const;
    double norm2() const;
    double norm_inf() const;

  private:
    std::vector<double> elems_;
};

bool operator==(const DenseVector& a, const DenseVector& b);

/// J^T J, computed once per (p,q) pair and mirrored so the result is
/// bitwise symmetric.
DenseMatrix gram(const DenseMatrix& j);

/// J^T r. Throws std::invalid_argument on a length mismatch.
DenseVector mul_transpose_vec(const DenseMatrix& j, const DenseVector& r);

/// Solves A x = b for symmetric positive definite A via a square-root-free
/// LDL^T factorization. Throws IndefiniteSystemError on a non-positive pivot
/// and std::invalid_argument when A is not square/symmetric.
DenseVector solve_spd(const DenseMatrix& a, const DenseVector& b);

}  // namespace lmnet
