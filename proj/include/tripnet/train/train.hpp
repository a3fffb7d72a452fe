#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "tripnet/data/dataset.hpp"
#include "tripnet/nn/network.hpp"

namespace tripnet::train {

struct TrainConfig {
    std::size_t batch_size = 20;
    std::size_t epochs = 5;
    double learning_rate = 0.001;
    std::uint64_t seed = 1;
    /// Share of rows held out inside train() for the validation curve. Must be 0
    /// when an explicit validation set is supplied.
    double validation_fraction = 0.2;

    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// ArgumentError unless batch_size >= 1, epochs >= 1, learning_rate > 0 and
/// validation_fraction in [0, 1).
void validate(const TrainConfig& config);

/// Per-epoch losses. val_loss is empty when training ran without validation rows.
struct LossCurve {
    std::vector<double> train_loss;
    std::vector<double> val_loss;

    friend bool operator==(const LossCurve&, const LossCurve&) = default;
};

struct TrainedModel {
    nn::Network network;
    data::ScalerParams scaler;
    data::FeatureSchema schema;
    data::Target target_name;
    LossCurve curve;
    TrainConfig config;
};

struct Loss {
    double value;
    Matrix d_pred;
};

/// Mean squared error over n x 1 columns and its gradient (2/n)(pred - actual).
Loss mse_loss(const Matrix& pred, const Matrix& actual);

/// First and second moment buffers, one pair per parameter matrix.
struct AdamState {
    std::vector<std::vector<double>> m_weights, v_weights, m_bias, v_bias;

    static AdamState zeros_like(const nn::Network& net);
};

struct AdamHyper {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// One bias-corrected Adam update at step t (t >= 1). Advances state in place.
nn::Network adam_step(const nn::Network& net, const nn::Gradients& grads, AdamState& state,
                      double learning_rate, std::size_t t, const AdamHyper& hyper = {});

/// [begin, end) row ranges of the minibatches for one epoch over `rows` rows.
/// The final batch may be shorter.
std::vector<std::pair<std::size_t, std::size_t>> batch_ranges(std::size_t rows, std::size_t batch_size);

/// Rows held out by fit() when validation_fraction > 0, and the rows it trains on.
/// Depends only on (n, fraction, seed), never on row values.
struct Holdout {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> val_rows;
};

Holdout holdout_split(std::size_t n, double validation_fraction, std::uint64_t seed);

/// Network plus curve, before bundling with scaler and schema.
struct FitResult {
    nn::Network network;
    LossCurve curve;
};

/// Minibatch Adam on already-scaled features. When `validation` is non-null the
/// curve's val_loss tracks it and config.validation_fraction must be 0;
/// otherwise validation_fraction of the rows is held out by a seeded split.
///
/// Each epoch reshuffles the training rows, trains every minibatch including a
/// short final one, and records the size-weighted mean of minibatch losses.
/// Throws DivergenceError on the first non-finite loss or parameter.
FitResult fit(const data::Dataset& scaled, const TrainConfig& config,
              const data::Dataset* validation = nullptr);

/// fit() bundled with the scaler used to prepare `scaled`.
TrainedModel train(const data::Dataset& scaled, const data::ScalerParams& scaler,
                   const TrainConfig& config, const data::Dataset* validation = nullptr);

/// Mean squared error of the network over a dataset.
double evaluate_mse(const nn::Network& net, const data::Dataset& scaled);

/// Forward pass on unscaled features through the model's scaler.
std::vector<double> predict(const TrainedModel& model, const Matrix& raw_features);

}  // namespace tripnet::train
