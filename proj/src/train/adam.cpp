#include <cmath>

#include "tripnet/error.hpp"
#include "tripnet/numerics/kernels.hpp"
#include "tripnet/train/train.hpp"

namespace tripnet::train {

AdamState AdamState::zeros_like(const nn::Network& net) {
    AdamState s;
    for (const auto& layer : net.layers()) {
        s.m_weights.emplace_back(layer.weights.size(), 0.0);
        s.v_weights.emplace_back(layer.weights.size(), 0.0);
        s.m_bias.emplace_back(layer.bias.size(), 0.0);
        s.v_bias.emplace_back(layer.bias.size(), 0.0);
    }
    return s;
}

nn::Network adam_step(const nn::Network& net, const nn::Gradients& grads, AdamState& state,
                      double learning_rate, std::size_t t, const AdamHyper& hyper) {
    if (t < 1) {
        throw ArgumentError("adam_step: step index t must be at least 1");
    }
    const std::size_t depth = net.depth();
    if (grads.size() != depth || state.m_weights.size() != depth || state.v_weights.size() != depth ||
        state.m_bias.size() != depth || state.v_bias.size() != depth) {
        throw ShapeError("adam_step: gradients/state depth does not match network depth " +
                         std::to_string(depth));
    }
    const kernels::AdamCoefficients coeff{
        hyper.beta1,
        hyper.beta2,
        hyper.epsilon,
        learning_rate,
        1.0 - std::pow(hyper.beta1, static_cast<double>(t)),
        1.0 - std::pow(hyper.beta2, static_cast<double>(t)),
    };
    const auto& k = kernels::active();

    std::vector<nn::DenseLayer> layers;
    layers.reserve(depth);
    for (std::size_t i = 0; i < depth; ++i) {
        const auto& layer = net.layers()[i];
        const auto& g = grads[i];
        if (g.d_weights.shape() != layer.weights.shape() || g.d_bias.shape() != layer.bias.shape() ||
            state.m_weights[i].size() != layer.weights.size() ||
            state.v_weights[i].size() != layer.weights.size() ||
            state.m_bias[i].size() != layer.bias.size() || state.v_bias[i].size() != layer.bias.size()) {
            throw ShapeError("adam_step: layer " + std::to_string(i) + " weights " +
                             to_string(layer.weights.shape()) + " vs gradient " +
                             to_string(g.d_weights.shape()) + " (or moment buffers) disagree");
        }
        std::vector<double> w(layer.weights.values().begin(), layer.weights.values().end());
        std::vector<double> b(layer.bias.values().begin(), layer.bias.values().end());
        k.adam_update(w.data(), state.m_weights[i].data(), state.v_weights[i].data(),
                      g.d_weights.values().data(), w.size(), coeff);
        k.adam_update(b.data(), state.m_bias[i].data(), state.v_bias[i].data(),
                      g.d_bias.values().data(), b.size(), coeff);
        layers.emplace_back(Matrix(layer.fan_in(), layer.fan_out(), std::move(w)),
                            Matrix(1, layer.fan_out(), std::move(b)), layer.activation);
    }
    return nn::Network(std::move(layers));
}

}  // namespace tripnet::train
