#include <algorithm>
#include <cmath>
#include <span>

#include "tripnet/error.hpp"
#include "tripnet/numerics/rng.hpp"
#include "tripnet/train/train.hpp"

namespace tripnet::train {
namespace {

// Stream labels for derive_seed.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kShuffleStream = 2;
constexpr std::uint64_t kValidationStream = 3;

}  // namespace

void validate(const TrainConfig& c) {
    if (c.batch_size < 1) throw ArgumentError("batch_size must be at least 1");
    if (c.epochs < 1) throw ArgumentError("epochs must be at least 1");
    if (!(c.learning_rate > 0.0) || !std::isfinite(c.learning_rate)) {
        throw ArgumentError("learning_rate must be positive and finite");
    }
    if (!(c.validation_fraction >= 0.0 && c.validation_fraction < 1.0)) {
        throw ArgumentError("validation_fraction must lie in [0, 1)");
    }
}

std::vector<std::pair<std::size_t, std::size_t>> batch_ranges(std::size_t rows, std::size_t batch_size) {
    if (batch_size < 1) {
        throw ArgumentError("batch_size must be at least 1");
    }
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t start = 0; start < rows; start += batch_size) {
        out.emplace_back(start, std::min(rows, start + batch_size));
    }
    return out;
}

Holdout holdout_split(std::size_t n, double validation_fraction, std::uint64_t seed) {
    const auto n_val =
        static_cast<std::size_t>(std::floor(static_cast<double>(n) * validation_fraction + 1e-9));
    if (n_val == 0 || n_val >= n) {
        throw ArgumentError("validation_fraction " + data::format_number(validation_fraction) +
                            " of " + std::to_string(n) + " rows leaves an empty split");
    }
    const auto perm = permutation(n, derive_seed(seed, {kValidationStream}));
    Holdout h;
    h.val_rows.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_val));
    h.train_rows.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_val), perm.end());
    std::sort(h.val_rows.begin(), h.val_rows.end());
    std::sort(h.train_rows.begin(), h.train_rows.end());
    return h;
}

double evaluate_mse(const nn::Network& net, const data::Dataset& scaled) {
    return mse_loss(nn::predict(net, scaled.features), scaled.target).value;
}

FitResult fit(const data::Dataset& scaled, const TrainConfig& config, const data::Dataset* validation) {
    validate(config);
    if (validation != nullptr && config.validation_fraction > 0.0) {
        throw ArgumentError(
            "fit: pass either an explicit validation set or a validation_fraction, not both");
    }
    if (validation != nullptr && validation->features.cols() != scaled.features.cols()) {
        throw SchemaError("fit: validation set has " + std::to_string(validation->features.cols()) +
                          " features, training set has " + std::to_string(scaled.features.cols()));
    }

    std::vector<std::size_t> train_rows;
    std::optional<data::Dataset> held_out;
    if (config.validation_fraction > 0.0) {
        Holdout h = holdout_split(scaled.size(), config.validation_fraction, config.seed);
        held_out = data::subset(scaled, h.val_rows);
        validation = &*held_out;
        train_rows = std::move(h.train_rows);
    } else {
        train_rows.resize(scaled.size());
        for (std::size_t i = 0; i < train_rows.size(); ++i) train_rows[i] = i;
    }

    Rng init_rng(derive_seed(config.seed, {kInitStream}));
    nn::Network net = nn::init_network(nn::paper_architecture(scaled.features.cols()), init_rng);
    AdamState state = AdamState::zeros_like(net);
    Rng shuffle_rng(derive_seed(config.seed, {kShuffleStream}));

    LossCurve curve;
    std::size_t step = 0;
    std::vector<std::size_t> order = train_rows;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(std::span<std::size_t>(order));
        double weighted = 0.0;
        std::size_t batch = 0;
        for (const auto& [begin, end] : batch_ranges(order.size(), config.batch_size)) {
            const std::size_t len = end - begin;
            const std::span<const std::size_t> rows(order.data() + begin, len);
            try {
                const Matrix x = select_rows(scaled.features, rows);
                const Matrix y = select_rows(scaled.target, rows);
                auto [output, cache] = nn::forward(net, x);
                const Loss loss = mse_loss(output, y);
                const nn::Gradients grads = nn::backward(net, cache, loss.d_pred);
                net = adam_step(net, grads, state, config.learning_rate, ++step);
                weighted += loss.value * static_cast<double>(len);
            } catch (const NumericError& e) {
                throw DivergenceError(epoch, batch, e.what());
            }
            ++batch;
        }
        const double epoch_loss = weighted / static_cast<double>(order.size());
        if (!std::isfinite(epoch_loss)) {
            throw DivergenceError(epoch, batch, "epoch loss is not finite");
        }
        curve.train_loss.push_back(epoch_loss);
        if (validation != nullptr) {
            try {
                curve.val_loss.push_back(evaluate_mse(net, *validation));
            } catch (const NumericError& e) {
                throw DivergenceError(epoch, batch, std::string("validation: ") + e.what());
            }
        }
    }
    return {std::move(net), std::move(curve)};
}

TrainedModel train(const data::Dataset& scaled, const data::ScalerParams& scaler,
                   const TrainConfig& config, const data::Dataset* validation) {
    data::validate(scaler);
    if (scaler.width() != scaled.schema.width()) {
        throw SchemaError("train: scaler width " + std::to_string(scaler.width()) +
                          " does not match schema width " + std::to_string(scaled.schema.width()));
    }
    FitResult fitted = fit(scaled, config, validation);
    return TrainedModel{std::move(fitted.network), scaler,         scaled.schema,
                        scaled.target_name,        std::move(fitted.curve), config};
}

std::vector<double> predict(const TrainedModel& model, const Matrix& raw_features) {
    const Matrix out = nn::predict(model.network, data::apply_scaler(raw_features, model.scaler));
    return {out.values().begin(), out.values().end()};
}

}  // namespace tripnet::train
