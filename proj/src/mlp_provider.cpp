#include "lmnet/mlp_provider.hpp"

#include <stdexcept>

namespace lmnet {

MlpResidualProvider::MlpResidualProvider(MlpShape shape, DenseMatrix x, DenseMatrix y)
    : shape_(std::move(shape)), x_(std::move(x)), y_(std::move(y)) {
    shape_.validate();
    if (x_.cols() != shape_.input_size())
        throw std::invalid_argument("MlpResidualProvider: feature count does not match input layer");
    if (y_.cols() != shape_.output_size())
        throw std::invalid_argument("MlpResidualProvider: target width does not match output layer");
    if (x_.rows() != y_.rows())
        throw std::invalid_argument("MlpResidualProvider: sample counts differ");
}

DenseVector MlpResidualProvider::residual(const DenseVector& beta) const {
    const MlpModel model = unflatten(shape_, beta);
    const DenseMatrix f = forward_batch(model, x_);
    const std::size_t m = shape_.output_size();
    DenseVector r(x_.rows() * m);
    for (std::size_t i = 0; i < x_.rows(); ++i)
        for (std::size_t k = 0; k < m; ++k) r[i * m + k] = y_(i, k) - f(i, k);
    return r;
}

std::pair<DenseVector, DenseMatrix> MlpResidualProvider::residual_jacobian(
    const DenseVector& beta) const {
    return lmnet::residual_jacobian(unflatten(shape_, beta), x_, y_);
}

}  // namespace lmnet
