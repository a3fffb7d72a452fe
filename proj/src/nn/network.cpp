#include "tripnet/nn/network.hpp"

#include <cmath>

#include "tripnet/error.hpp"
#include "tripnet/numerics/kernels.hpp"

namespace tripnet::nn {
namespace {

Matrix map_values(const Matrix& z, double (*fn)(double)) {
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        out[i] = fn(z.values()[i]);
    }
    return Matrix(z.rows(), z.cols(), std::move(out));
}

double tanh_grad(double z) {
    const double t = std::tanh(z);
    return 1.0 - t * t;
}

}  // namespace

std::string_view to_string(Activation a) noexcept {
    switch (a) {
        case Activation::ReLU:
            return "relu";
        case Activation::Tanh:
            return "tanh";
        case Activation::Identity:
            return "identity";
    }
    return "unknown";
}

std::optional<Activation> parse_activation(std::string_view name) noexcept {
    if (name == "relu") return Activation::ReLU;
    if (name == "tanh") return Activation::Tanh;
    if (name == "identity") return Activation::Identity;
    return std::nullopt;
}

Matrix activate(Activation a, const Matrix& z) {
    switch (a) {
        case Activation::ReLU: {
            std::vector<double> out(z.size());
            kernels::active().relu(z.values().data(), out.data(), z.size());
            return Matrix(z.rows(), z.cols(), std::move(out));
        }
        case Activation::Tanh:
            return map_values(z, [](double v) { return std::tanh(v); });
        case Activation::Identity:
            return z;
    }
    throw ArgumentError("activate: unknown activation");
}

Matrix activate_grad(Activation a, const Matrix& z) {
    switch (a) {
        case Activation::ReLU: {
            std::vector<double> out(z.size());
            kernels::active().relu_grad(z.values().data(), out.data(), z.size());
            return Matrix(z.rows(), z.cols(), std::move(out));
        }
        case Activation::Tanh:
            return map_values(z, tanh_grad);
        case Activation::Identity:
            return Matrix::filled(z.rows(), z.cols(), 1.0);
    }
    throw ArgumentError("activate_grad: unknown activation");
}

DenseLayer::DenseLayer(Matrix w, Matrix b, Activation act)
    : weights(std::move(w)), bias(std::move(b)), activation(act) {
    if (bias.rows() != 1 || bias.cols() != weights.cols()) {
        throw ShapeError("dense layer: bias must be 1x" + std::to_string(weights.cols()) +
                         " for weights " + to_string(weights.shape()) + ", got " +
                         to_string(bias.shape()));
    }
}

bool operator==(const DenseLayer& a, const DenseLayer& b) {
    return a.activation == b.activation && a.weights == b.weights && a.bias == b.bias;
}

Network::Network(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) {
        throw ArgumentError("network needs at least one layer");
    }
    for (std::size_t i = 0; i + 1 < layers_.size(); ++i) {
        if (layers_[i].fan_out() != layers_[i + 1].fan_in()) {
            throw ShapeError("network: layer " + std::to_string(i) + " outputs " +
                             to_string(layers_[i].weights.shape()) + " but layer " +
                             std::to_string(i + 1) + " expects " +
                             to_string(layers_[i + 1].weights.shape()));
        }
    }
}

bool operator==(const Network& a, const Network& b) { return a.layers_ == b.layers_; }

ParamCount param_count(const Network& net) {
    ParamCount pc;
    for (const auto& layer : net.layers()) {
        pc.per_layer.push_back(layer.param_count());
        pc.total += layer.param_count();
    }
    return pc;
}

Network paper_architecture(std::size_t n_features) {
    if (n_features == 0) {
        throw ArgumentError("paper_architecture: n_features must be at least 1");
    }
    constexpr std::size_t kHidden = 5;
    std::vector<DenseLayer> layers;
    layers.emplace_back(Matrix(n_features, kHidden), Matrix(1, kHidden), Activation::ReLU);
    layers.emplace_back(Matrix(kHidden, kHidden), Matrix(1, kHidden), Activation::Tanh);
    layers.emplace_back(Matrix(kHidden, 1), Matrix(1, 1), Activation::Identity);
    return Network(std::move(layers));
}

Network init_network(const Network& net, Rng& rng) {
    std::vector<DenseLayer> layers;
    layers.reserve(net.depth());
    for (const auto& layer : net.layers()) {
        const double limit =
            std::sqrt(6.0 / static_cast<double>(layer.fan_in() + layer.fan_out()));
        std::vector<double> w(layer.weights.size());
        for (double& x : w) {
            // uniform() is half-open; reject the lower edge so weights stay inside (-s, s).
            do {
                x = rng.uniform(-limit, limit);
            } while (x == -limit);
        }
        layers.emplace_back(Matrix(layer.fan_in(), layer.fan_out(), std::move(w)),
                            Matrix(1, layer.fan_out()), layer.activation);
    }
    return Network(std::move(layers));
}

ForwardResult forward(const Network& net, const Matrix& batch) {
    if (batch.cols() != net.input_width()) {
        throw ShapeError("forward: batch " + to_string(batch.shape()) + " does not match input width " +
                         std::to_string(net.input_width()) + " of first layer " +
                         to_string(net.layers().front().weights.shape()));
    }
    ForwardCache cache{batch, {}, {}};
    cache.pre.reserve(net.depth());
    cache.post.reserve(net.depth());
    const Matrix* a = &batch;
    for (const auto& layer : net.layers()) {
        cache.pre.push_back(add_row_broadcast(matmul(*a, layer.weights), layer.bias));
        cache.post.push_back(activate(layer.activation, cache.pre.back()));
        a = &cache.post.back();
    }
    Matrix output = cache.post.back();
    return {std::move(output), std::move(cache)};
}

Matrix predict(const Network& net, const Matrix& batch) {
    if (batch.cols() != net.input_width()) {
        throw ShapeError("predict: batch " + to_string(batch.shape()) + " does not match input width " +
                         std::to_string(net.input_width()));
    }
    Matrix a = batch;
    for (const auto& layer : net.layers()) {
        a = activate(layer.activation, add_row_broadcast(matmul(a, layer.weights), layer.bias));
    }
    return a;
}

Gradients backward(const Network& net, const ForwardCache& cache, const Matrix& d_output) {
    if (cache.pre.size() != net.depth() || cache.post.size() != net.depth()) {
        throw ShapeError("backward: cache depth " + std::to_string(cache.pre.size()) +
                         " does not match network depth " + std::to_string(net.depth()));
    }
    if (d_output.shape() != cache.post.back().shape()) {
        throw ShapeError("backward: d_output " + to_string(d_output.shape()) +
                         " does not match forward output " + to_string(cache.post.back().shape()));
    }
    Gradients grads(net.depth(), LayerGradients{Matrix(1, 1), Matrix(1, 1)});
    Matrix upstream = d_output;
    for (std::size_t i = net.depth(); i-- > 0;) {
        const DenseLayer& layer = net.layers()[i];
        const Matrix& z = cache.pre[i];
        const Matrix& a_in = i == 0 ? cache.input : cache.post[i - 1];
        if (a_in.cols() != layer.fan_in() || z.cols() != layer.fan_out()) {
            throw ShapeError("backward: cache for layer " + std::to_string(i) + " has input " +
                             to_string(a_in.shape()) + " and pre-activation " + to_string(z.shape()) +
                             ", layer is " + std::to_string(layer.fan_in()) + "->" +
                             std::to_string(layer.fan_out()));
        }
        const Matrix dz = layer.activation == Activation::Identity
                              ? upstream
                              : hadamard(upstream, activate_grad(layer.activation, z));
        grads[i] = LayerGradients{matmul(transpose(a_in), dz), column_sums(dz)};
        if (i > 0) {
            upstream = matmul(dz, transpose(layer.weights));
        }
    }
    return grads;
}

}  // namespace tripnet::nn
