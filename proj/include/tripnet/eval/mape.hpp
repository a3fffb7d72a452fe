#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tripnet/data/dataset.hpp"
#include "tripnet/train/train.hpp"

namespace tripnet::eval {

/// What to do with a zero actual value, where MAPE is undefined.
enum class ZeroPolicy { Error, Exclude };

std::optional<ZeroPolicy> parse_zero_policy(std::string_view text) noexcept;

struct Pair {
    double actual;
    double predicted;
};

struct EvalReport {
    std::size_t n = 0;  // pairs included in the mean
    double mape_percent = 0.0;
    double accuracy_percent = 100.0;  // 100 - mape_percent, a reporting convention
    std::vector<Pair> pairs;          // every pair, in input order
    std::size_t excluded_zero_actuals = 0;

    /// `mape=<float> accuracy=<float> n=<int> excluded=<int>`
    std::string summary_line() const;
};

/// MAPE = (100 / n) * sum |A - F| / |A| over the included pairs.
EvalReport mape(std::span<const double> actual, std::span<const double> forecast,
                ZeroPolicy policy = ZeroPolicy::Error);

/// Scales `ds` (raw features) with the model's scaler, predicts and scores.
EvalReport evaluate_model(const train::TrainedModel& model, const data::Dataset& ds,
                          ZeroPolicy policy = ZeroPolicy::Error);

/// Writes `index,actual,predicted` rows. IoError when the destination is unwritable.
void export_pairs(const EvalReport& report, const std::filesystem::path& destination);

std::string pairs_csv(const EvalReport& report);

}  // namespace tripnet::eval
