#pragma once

// Test-only reference implementations. These deliberately avoid the library's
// kernels and Matrix operations so they can check them.

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "tripnet/data/dataset.hpp"
#include "tripnet/nn/network.hpp"
#include "tripnet/numerics/matrix.hpp"

namespace tripnet::testing {

/// Plain row-major buffer with an index helper.
struct Dense {
    std::size_t rows;
    std::size_t cols;
    std::vector<double> v;
    double& operator()(std::size_t r, std::size_t c) { return v[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
};

inline Dense to_dense(const Matrix& m) {
    return {m.rows(), m.cols(), std::vector<double>(m.values().begin(), m.values().end())};
}

inline Dense naive_matmul(const Dense& a, const Dense& b) {
    Dense c{a.rows, b.cols, std::vector<double>(a.rows * b.cols, 0.0)};
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < b.cols; ++j) {
            long double acc = 0.0L;
            for (std::size_t k = 0; k < a.cols; ++k) acc += static_cast<long double>(a(i, k)) * b(k, j);
            c(i, j) = static_cast<double>(acc);
        }
    return c;
}

inline Matrix random_matrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols,
                            double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(rows * cols);
    for (double& x : v) x = dist(gen);
    return Matrix(rows, cols, std::move(v));
}

/// Scalar forward pass written out per element; returns n x 1 outputs.
inline std::vector<double> naive_forward(const nn::Network& net, const Dense& x) {
    Dense a = x;
    for (const auto& layer : net.layers()) {
        Dense z{a.rows, layer.fan_out(), std::vector<double>(a.rows * layer.fan_out())};
        for (std::size_t i = 0; i < a.rows; ++i)
            for (std::size_t j = 0; j < layer.fan_out(); ++j) {
                double acc = layer.bias(0, j);
                for (std::size_t k = 0; k < layer.fan_in(); ++k) acc += a(i, k) * layer.weights(k, j);
                switch (layer.activation) {
                    case nn::Activation::ReLU: acc = acc > 0 ? acc : 0; break;
                    case nn::Activation::Tanh: acc = std::tanh(acc); break;
                    case nn::Activation::Identity: break;
                }
                z(i, j) = acc;
            }
        a = std::move(z);
    }
    return a.v;
}

inline double naive_mse(const std::vector<double>& pred, const Dense& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) s += (pred[i] - y.v[i]) * (pred[i] - y.v[i]);
    return s / static_cast<double>(pred.size());
}

/// Rebuilds `net` with one parameter replaced. which = 0 for weights, 1 for bias.
inline nn::Network perturb(const nn::Network& net, std::size_t layer, int which, std::size_t idx,
                           double delta) {
    std::vector<nn::DenseLayer> layers = net.layers();
    auto& l = layers[layer];
    const Matrix& target = which == 0 ? l.weights : l.bias;
    std::vector<double> v(target.values().begin(), target.values().end());
    v[idx] += delta;
    Matrix replaced(target.rows(), target.cols(), std::move(v));
    if (which == 0) l.weights = replaced; else l.bias = replaced;
    return nn::Network(std::move(layers));
}

/// Central finite-difference gradient of naive_mse(naive_forward(net, x), y) w.r.t.
/// every parameter, laid out as gradients[layer] = {dW values, db values}.
struct NumericGrad {
    std::vector<std::vector<double>> d_weights;
    std::vector<std::vector<double>> d_bias;
};

inline NumericGrad finite_difference_grad(const nn::Network& net, const Dense& x, const Dense& y,
                                          double h) {
    NumericGrad g;
    for (std::size_t li = 0; li < net.depth(); ++li) {
        for (int which = 0; which < 2; ++which) {
            const auto& m = which == 0 ? net.layers()[li].weights : net.layers()[li].bias;
            std::vector<double> out(m.size());
            for (std::size_t i = 0; i < m.size(); ++i) {
                const double plus = naive_mse(naive_forward(perturb(net, li, which, i, h), x), y);
                const double minus = naive_mse(naive_forward(perturb(net, li, which, i, -h), x), y);
                out[i] = (plus - minus) / (2.0 * h);
            }
            (which == 0 ? g.d_weights : g.d_bias).push_back(std::move(out));
        }
    }
    return g;
}

/// |a - n| / max(1e-8, |a| + |n|)
inline double relative_error(double analytic, double numeric) {
    return std::abs(analytic - numeric) / std::max(1e-8, std::abs(analytic) + std::abs(numeric));
}

/// Independent MAPE loop: percent, no zero handling.
inline double naive_mape(const std::vector<double>& a, const std::vector<double>& f) {
    double total = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        double ratio = (a[t] - f[t]) / a[t];
        if (ratio < 0) ratio = -ratio;
        total += ratio;
    }
    return total * 100.0 / static_cast<double>(a.size());
}

/// Population mean / std of one column.
inline std::pair<double, double> column_moments(const Matrix& m, std::size_t col) {
    long double sum = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) sum += m(i, col);
    const long double mean = sum / m.rows();
    long double ss = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) ss += (m(i, col) - mean) * (m(i, col) - mean);
    return {static_cast<double>(mean), static_cast<double>(std::sqrt(ss / m.rows()))};
}

/// One-feature dataset for scaler and training tests.
inline data::Dataset single_feature_dataset(const std::vector<double>& x, const std::vector<double>& y) {
    return data::Dataset(Matrix(x.size(), 1, x), Matrix(y.size(), 1, y), data::FeatureSchema({"x"}),
                         data::Target::PersonTrips);
}

}  // namespace tripnet::testing
