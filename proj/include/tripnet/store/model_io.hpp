#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "tripnet/train/train.hpp"

namespace tripnet::store {

inline constexpr int kSchemaVersion = 1;

struct SaveOptions {
    bool include_timestamp = false;
};

/// JSON model document. Without a timestamp the text is a pure function of the model.
///
/// Top-level keys: schema_version, layers [{fan_in, fan_out, activation, weights,
/// bias}], scaler {means, stds}, features, target, train_config, total_params and
/// optionally created_at (RFC 3339, UTC). Doubles use the shortest decimal form that
/// reads back to the same bits.
std::string to_json(const train::TrainedModel& model, const SaveOptions& options = {});

/// Parses and fully re-validates a document. VersionError for an unknown
/// schema_version; CorruptionError naming the offending field otherwise.
/// The loss curve is not stored, so the returned model's curve is empty.
train::TrainedModel from_json(const std::string& text);

void save(const train::TrainedModel& model, const std::filesystem::path& destination,
          const SaveOptions& options = {});
train::TrainedModel load(const std::filesystem::path& source);

}  // namespace tripnet::store
