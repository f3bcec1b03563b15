#include "lmnet/mlp.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace lmnet {

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::sigmoid: return "sigmoid";
        case Activation::tanh: return "tanh";
        case Activation::linear: return "linear";
    }
    throw std::invalid_argument("unknown activation");
}

Activation activation_from_name(const std::string& name) {
    if (name == "sigmoid") return Activation::sigmoid;
    if (name == "tanh") return Activation::tanh;
    if (name == "linear") return Activation::linear;
    throw std::invalid_argument("unknown activation name: " + name);
}

double activate(Activation a, double z) {
    switch (a) {
        case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-z));
        case Activation::tanh: return std::tanh(z);
        case Activation::linear: return z;
    }
    throw std::invalid_argument("unknown activation");
}

double activate_derivative_from_value(Activation a, double y) {
    switch (a) {
        case Activation::sigmoid: return y * (1.0 - y);
        case Activation::tanh: return 1.0 - y * y;
        case Activation::linear: return 1.0;
    }
    throw std::invalid_argument("unknown activation");
}

std::size_t MlpShape::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l)
        n += layer_sizes[l + 1] * (layer_sizes[l] + 1);
    return n;
}

void MlpShape::validate() const {
    if (layer_sizes.size() < 2)
        throw std::invalid_argument("invalid architecture: need at least input and output layers");
    for (std::size_t s : layer_sizes)
        if (s == 0) throw std::invalid_argument("invalid architecture: zero-size layer");
    if (hidden_activation == Activation::linear)
        throw std::invalid_argument("hidden activation must be sigmoid or tanh");
    if (output_activation == Activation::tanh)
        throw std::invalid_argument("output activation must be sigmoid or linear");
}

bool operator==(const MlpShape& a, const MlpShape& b) {
    return a.layer_sizes == b.layer_sizes && a.hidden_activation == b.hidden_activation &&
           a.output_activation == b.output_activation;
}

namespace {

// Platform-independent uniform draw in [-s, s) from the raw 64-bit stream.
double uniform_symmetric(std::mt19937_64& gen, double s) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;  // [0, 1)
    return s * (2.0 * u - 1.0);
}

Activation layer_activation(const MlpShape& shape, std::size_t layer) {
    return layer + 1 == shape.layer_count() ? shape.output_activation : shape.hidden_activation;
}

}  // namespace

MlpModel init_model(const MlpShape& shape, const InitSpec& spec) {
    shape.validate();
    std::mt19937_64 gen(spec.seed);
    MlpModel m;
    m.shape = shape;
    for (std::size_t l = 0; l + 1 < shape.layer_sizes.size(); ++l) {
        const std::size_t fan_in = shape.layer_sizes[l];
        const std::size_t fan_out = shape.layer_sizes[l + 1];
        const double s = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        DenseMatrix w(fan_out, fan_in);
        for (std::size_t u = 0; u < fan_out; ++u)
            for (std::size_t v = 0; v < fan_in; ++v) w(u, v) = uniform_symmetric(gen, s);
        m.weights.push_back(std::move(w));
        m.biases.emplace_back(fan_out);
    }
    return m;
}

DenseVector forward(const MlpModel& model, const DenseVector& x) {
    if (x.size() != model.shape.input_size())
        throw std::invalid_argument("forward: input length does not match first layer");
    std::vector<double> act(x.elements());
    for (std::size_t l = 0; l < model.shape.layer_count(); ++l) {
        const DenseMatrix& w = model.weights[l];
        const DenseVector& b = model.biases[l];
        const Activation a = layer_activation(model.shape, l);
        std::vector<double> next(w.rows());
        for (std::size_t u = 0; u < w.rows(); ++u) {
            double z = b[u];
            for (std::size_t v = 0; v < w.cols(); ++v) z += w(u, v) * act[v];
            next[u] = activate(a, z);
        }
        act = std::move(next);
    }
    return DenseVector::unchecked(std::move(act));
}

DenseMatrix forward_batch(const MlpModel& model, const DenseMatrix& x) {
    DenseMatrix out(x.rows(), model.shape.output_size());
    DenseVector row(x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) row[j] = x(i, j);
        const DenseVector y = forward(model, row);
        for (std::size_t k = 0; k < y.size(); ++k) out(i, k) = y[k];
    }
    return out;
}

DenseVector flatten(const MlpModel& model) {
    std::vector<double> beta;
    beta.reserve(model.shape.parameter_count());
    for (std::size_t l = 0; l < model.shape.layer_count(); ++l) {
        const auto& w = model.weights[l].elements();  // row-major already
        beta.insert(beta.end(), w.begin(), w.end());
        const auto& b = model.biases[l].elements();
        beta.insert(beta.end(), b.begin(), b.end());
    }
    return DenseVector::unchecked(std::move(beta));
}

MlpModel unflatten(const MlpShape& shape, const DenseVector& beta) {
    shape.validate();
    if (beta.size() != shape.parameter_count())
        throw std::invalid_argument("unflatten: parameter vector length does not match shape");
    MlpModel m;
    m.shape = shape;
    std::size_t pos = 0;
    for (std::size_t l = 0; l + 1 < shape.layer_sizes.size(); ++l) {
        const std::size_t fan_in = shape.layer_sizes[l];
        const std::size_t fan_out = shape.layer_sizes[l + 1];
        DenseMatrix w(fan_out, fan_in);
        for (std::size_t u = 0; u < fan_out; ++u)
            for (std::size_t v = 0; v < fan_in; ++v) w(u, v) = beta[pos++];
        DenseVector b(fan_out);
        for (std::size_t u = 0; u < fan_out; ++u) b[u] = beta[pos++];
        m.weights.push_back(std::move(w));
        m.biases.push_back(std::move(b));
    }
    return m;
}

std::pair<DenseVector, DenseMatrix> residual_jacobian(const MlpModel& model,
                                                      const DenseMatrix& x,
                                                      const DenseMatrix& y) {
    const MlpShape& shape = model.shape;
    if (x.cols() != shape.input_size())
        throw std::invalid_argument("residual_jacobian: feature count does not match input layer");
    if (y.cols() != shape.output_size())
        throw std::invalid_argument("residual_jacobian: target width does not match output layer");
    if (x.rows() != y.rows())
        throw std::invalid_argument("residual_jacobian: sample counts differ");

    const std::size_t samples = x.rows();
    const std::size_t m = shape.output_size();
    const std::size_t n_layers = shape.layer_count();
    const std::size_t n_params = shape.parameter_count();

    // Parameter offset of each layer block in the flattened vector.
    std::vector<std::size_t> offset(n_layers);
    for (std::size_t l = 0, pos = 0; l < n_layers; ++l) {
        offset[l] = pos;
        pos += shape.layer_sizes[l + 1] * (shape.layer_sizes[l] + 1);
    }

    DenseVector r(samples * m);
    DenseMatrix jac(samples * m, n_params);

    std::vector<std::vector<double>> acts(n_layers + 1);
    for (std::size_t i = 0; i < samples; ++i) {
        acts[0].assign(x.cols(), 0.0);
        for (std::size_t j = 0; j < x.cols(); ++j) acts[0][j] = x(i, j);
        for (std::size_t l = 0; l < n_layers; ++l) {
            const DenseMatrix& w = model.weights[l];
            const DenseVector& b = model.biases[l];
            const Activation a = layer_activation(shape, l);
            acts[l + 1].assign(w.rows(), 0.0);
            for (std::size_t u = 0; u < w.rows(); ++u) {
                double z = b[u];
                for (std::size_t v = 0; v < w.cols(); ++v) z += w(u, v) * acts[l][v];
                acts[l + 1][u] = activate(a, z);
            }
        }

        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t row = i * m + k;
            r[row] = y(i, k) - acts[n_layers][k];

            // Reverse pass seeded at output unit k. g holds df_k/dz for the
            // current layer's units.
            std::vector<double> g(m, 0.0);
            g[k] = activate_derivative_from_value(shape.output_activation, acts[n_layers][k]);
            for (std::size_t l = n_layers; l-- > 0;) {
                const DenseMatrix& w = model.weights[l];
                const std::size_t fan_in = w.cols();
                const std::size_t fan_out = w.rows();
                for (std::size_t u = 0; u < fan_out; ++u) {
                    const double gu = g[u];
                    const std::size_t wbase = offset[l] + u * fan_in;
                    for (std::size_t v = 0; v < fan_in; ++v)
                        jac(row, wbase + v) = gu * acts[l][v];
                    jac(row, offset[l] + fan_out * fan_in + u) = gu;
                }
                if (l > 0) {
                    std::vector<double> gprev(fan_in, 0.0);
                    for (std::size_t v = 0; v < fan_in; ++v) {
                        double s = 0.0;
                        for (std::size_t u = 0; u < fan_out; ++u) s += w(u, v) * g[u];
                        gprev[v] =
                            s * activate_derivative_from_value(shape.hidden_activation, acts[l][v]);
                    }
                    g = std::move(gprev);
                }
            }
        }
    }
    return {std::move(r), std::move(jac)};
}

}  // namespace lmnet
