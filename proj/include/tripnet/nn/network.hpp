#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tripnet/numerics/matrix.hpp"
#include "tripnet/numerics/rng.hpp"

namespace tripnet::nn {

enum class Activation { ReLU, Tanh, Identity };

std::string_view to_string(Activation a) noexcept;
std::optional<Activation> parse_activation(std::string_view name) noexcept;

/// Elementwise activation.
Matrix activate(Activation a, const Matrix& z);

/// Elementwise derivative evaluated at the pre-activation z. ReLU'(0) is 0.
Matrix activate_grad(Activation a, const Matrix& z);

/// Affine layer followed by an activation: A = act(X * W + b).
/// weights is fan_in x fan_out, bias is 1 x fan_out.
struct DenseLayer {
    Matrix weights;
    Matrix bias;
    Activation activation;

    DenseLayer(Matrix w, Matrix b, Activation act);

    std::size_t fan_in() const noexcept { return weights.rows(); }
    std::size_t fan_out() const noexcept { return weights.cols(); }
    std::size_t param_count() const noexcept { return fan_in() * fan_out() + fan_out(); }
};

/// Non-empty stack of dense layers whose widths chain.
class Network {
public:
    explicit Network(std::vector<DenseLayer> layers);

    const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
    std::size_t depth() const noexcept { return layers_.size(); }
    std::size_t input_width() const noexcept { return layers_.front().fan_in(); }
    std::size_t output_width() const noexcept { return layers_.back().fan_out(); }

    friend bool operator==(const Network& a, const Network& b);

private:
    std::vector<DenseLayer> layers_;
};

bool operator==(const DenseLayer& a, const DenseLayer& b);

struct ParamCount {
    std::vector<std::size_t> per_layer;
    std::size_t total = 0;
};

ParamCount param_count(const Network& net);

/// Dense(n->5, ReLU) -> Dense(5->5, Tanh) -> Dense(5->1, Identity).
/// Weights are zero placeholders; run init_network before training.
/// With 16 inputs this is 85 + 30 + 6 = 121 parameters.
Network paper_architecture(std::size_t n_features);

/// Glorot-uniform weights, U(-s, s) with s = sqrt(6 / (fan_in + fan_out)); zero biases.
Network init_network(const Network& net, Rng& rng);

/// Intermediates of one forward pass. pre[i] and post[i] belong to layer i.
struct ForwardCache {
    Matrix input;
    std::vector<Matrix> pre;
    std::vector<Matrix> post;
};

struct ForwardResult {
    Matrix output;
    ForwardCache cache;
};

ForwardResult forward(const Network& net, const Matrix& batch);

/// Forward pass without keeping intermediates.
Matrix predict(const Network& net, const Matrix& batch);

struct LayerGradients {
    Matrix d_weights;
    Matrix d_bias;
};

using Gradients = std::vector<LayerGradients>;

/// Reverse-mode gradients of a scalar loss given dL/d(output).
Gradients backward(const Network& net, const ForwardCache& cache, const Matrix& d_output);

}  // namespace tripnet::nn
