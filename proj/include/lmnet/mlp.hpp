#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lmnet/linalg.hpp"

namespace lmnet {

enum class Activation { sigmoid, tanh, linear };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

double activate(Activation a, double z);
/// Derivative expressed through the activation value itself
/// (sigmoid: y(1-y), tanh: 1-y^2, linear: 1).
double activate_derivative_from_value(Activation a, double y);

/// Layer sizes plus activation choices; fixes the parameter layout.
struct MlpShape {
    std::vector<std::size_t> layer_sizes;  // input, hidden..., output
    Activation hidden_activation = Activation::sigmoid;
    Activation output_activation = Activation::sigmoid;

    std::size_t input_size() const { return layer_sizes.front(); }
    std::size_t output_size() const { return layer_sizes.back(); }
    std::size_t layer_count() const { return layer_sizes.size() - 1; }

    /// sum over layers of fan_out * (fan_in + 1)
    std::size_t parameter_count() const;

    /// Throws std::invalid_argument for <2 layers, a zero size, a linear
    /// hidden activation or a tanh output activation.
    void validate() const;
};

bool operator==(const MlpShape& a, const MlpShape& b);

struct InitSpec {
    enum class Scheme { uniform_scaled };
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::uniform_scaled;
};

/// Weight matrix l is (layer_sizes[l+1] x layer_sizes[l]); bias l has
/// length layer_sizes[l+1].
struct MlpModel {
    MlpShape shape;
    std::vector<DenseMatrix> weights;
    std::vector<DenseVector> biases;
};

/// Weights drawn uniformly in [-s, s] with s = sqrt(6/(fan_in+fan_out));
/// biases zero. The draw depends only on the seed, not on the platform.
MlpModel init_model(const MlpShape& shape, const InitSpec& spec);

DenseVector forward(const MlpModel& model, const DenseVector& x);

/// One forward pass per row of x; result is (rows x output_size).
DenseMatrix forward_batch(const MlpModel& model, const DenseMatrix& x);

/// Parameter vector beta: layer by layer, weights in row-major order, then
/// biases. unflatten is the exact inverse.
DenseVector flatten(const MlpModel& model);
MlpModel unflatten(const MlpShape& shape, const DenseVector& beta);

/// Residuals r[i*m+k] = y(i,k) - f_k(x_i) stacked sample-major, and the
/// Jacobian J with J(i*m+k, p) = d f_k(x_i) / d beta_p. Note the sign
/// convention J = df/dbeta (not dr/dbeta), so the LM normal equations read
/// (lambda D + J^T J) delta = J^T r. Computed by reverse-mode accumulation
/// per sample-output pair.
std::pair<DenseVector, DenseMatrix> residual_jacobian(const MlpModel& model,
                                                      const DenseMatrix& x,
                                                      const DenseMatrix& y);

}  // namespace lmnet
