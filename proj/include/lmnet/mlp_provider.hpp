#pragma once

#include <utility>

#include "lmnet/lm.hpp"
#include "lmnet/mlp.hpp"

namespace lmnet {

/// Binds an MLP shape to a fixed (X, y) batch so lm_train can drive it.
class MlpResidualProvider : public ResidualProvider {
  public:
    MlpResidualProvider(MlpShape shape, DenseMatrix x, DenseMatrix y);

    std::size_t residual_size() const override { return x_.rows() * shape_.output_size(); }
    std::size_t parameter_count() const override { return shape_.parameter_count(); }
    DenseVector residual(const DenseVector& beta) const override;
    std::pair<DenseVector, DenseMatrix> residual_jacobian(const DenseVector& beta) const override;

    const MlpShape& shape() const { return shape_; }

  private:
    MlpShape shape_;
    DenseMatrix x_;
    DenseMatrix y_;
};

}  // namespace lmnet
