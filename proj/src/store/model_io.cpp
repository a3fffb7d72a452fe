#include "tripnet/store/model_io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tripnet/error.hpp"
#include "tripnet/io/atomic_file.hpp"

namespace tripnet::store {
namespace {

using Json = nlohmann::ordered_json;

std::string utc_now_rfc3339() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

[[noreturn]] void corrupt(const std::string& field, const std::string& why) {
    throw CorruptionError("model document: field '" + field + "' " + why);
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
        corrupt(where.empty() ? key : where + "." + key, "is missing");
    }
    return obj.at(key);
}

std::size_t require_count(const Json& obj, const char* key, const std::string& where) {
    const Json& v = require(obj, key, where);
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0) {
        corrupt(where + "." + key, "must be a positive integer");
    }
    return v.get<std::size_t>();
}

std::vector<double> require_numbers(const Json& obj, const char* key, const std::string& where,
                                    std::size_t expected) {
    const Json& v = require(obj, key, where);
    const std::string field = where.empty() ? key : where + "." + key;
    if (!v.is_array()) {
        corrupt(field, "must be an array of numbers");
    }
    if (v.size() != expected) {
        corrupt(field, "has " + std::to_string(v.size()) + " entries, expected " +
                           std::to_string(expected));
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number()) corrupt(field, "must contain only numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

}  // namespace

std::string to_json(const train::TrainedModel& model, const SaveOptions& options) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    Json layers = Json::array();
    for (const auto& layer : model.network.layers()) {
        Json l;
        l["fan_in"] = layer.fan_in();
        l["fan_out"] = layer.fan_out();
        l["activation"] = std::string(nn::to_string(layer.activation));
        l["weights"] = std::vector<double>(layer.weights.values().begin(), layer.weights.values().end());
        l["bias"] = std::vector<double>(layer.bias.values().begin(), layer.bias.values().end());
        layers.push_back(std::move(l));
    }
    doc["layers"] = std::move(layers);
    doc["scaler"] = {{"means", model.scaler.means}, {"stds", model.scaler.stds}};
    doc["features"] = model.schema.features();
    doc["target"] = std::string(data::to_string(model.target_name));
    doc["train_config"] = {
        {"batch_size", model.config.batch_size},
        {"epochs", model.config.epochs},
        {"learning_rate", model.config.learning_rate},
        {"seed", model.config.seed},
        {"validation_fraction", model.config.validation_fraction},
    };
    doc["total_params"] = nn::param_count(model.network).total;
    if (options.include_timestamp) {
        doc["created_at"] = utc_now_rfc3339();
    }
    return doc.dump(2) + "\n";
}

train::TrainedModel from_json(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception& e) {
        throw CorruptionError(std::string("model document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw CorruptionError("model document must be a JSON object");
    }
    if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer() ||
        doc["schema_version"].get<std::int64_t>() != kSchemaVersion) {
        const std::string seen = doc.contains("schema_version") ? doc["schema_version"].dump() : "none";
        throw VersionError("model document schema_version " + seen + " is not supported (expected " +
                           std::to_string(kSchemaVersion) + ")");
    }

    const Json& layers_json = require(doc, "layers", "");
    if (!layers_json.is_array() || layers_json.empty()) {
        corrupt("layers", "must be a non-empty array");
    }
    std::vector<nn::DenseLayer> layers;
    for (std::size_t i = 0; i < layers_json.size(); ++i) {
        const std::string where = "layers[" + std::to_string(i) + "]";
        const Json& l = layers_json[i];
        const std::size_t fan_in = require_count(l, "fan_in", where);
        const std::size_t fan_out = require_count(l, "fan_out", where);
        const Json& act = require(l, "activation", where);
        const auto activation = act.is_string() ? nn::parse_activation(act.get<std::string>())
                                                : std::optional<nn::Activation>{};
        if (!activation) corrupt(where + ".activation", "is not relu, tanh or identity");
        auto w = require_numbers(l, "weights", where, fan_in * fan_out);
        auto b = require_numbers(l, "bias", where, fan_out);
        try {
            layers.emplace_back(Matrix(fan_in, fan_out, std::move(w)), Matrix(1, fan_out, std::move(b)),
                                *activation);
        } catch (const Error& e) {
            corrupt(where, e.what());
        }
    }
    std::optional<nn::Network> network;
    try {
        network.emplace(std::move(layers));
    } catch (const Error& e) {
        corrupt("layers", std::string("do not chain: ") + e.what());
    }

    const Json& features_json = require(doc, "features", "");
    if (!features_json.is_array()) corrupt("features", "must be an array of names");
    std::vector<std::string> features;
    for (const auto& f : features_json) {
        if (!f.is_string()) corrupt("features", "must contain only strings");
        features.push_back(f.get<std::string>());
    }
    std::optional<data::FeatureSchema> schema;
    try {
        schema.emplace(std::move(features));
    } catch (const Error& e) {
        corrupt("features", e.what());
    }
    if (schema->width() != network->input_width()) {
        corrupt("features", "lists " + std::to_string(schema->width()) +
                                " names but the first layer takes " +
                                std::to_string(network->input_width()) + " inputs");
    }
    if (network->output_width() != 1) {
        corrupt("layers", "final layer must have exactly one output");
    }

    const Json& scaler_json = require(doc, "scaler", "");
    data::ScalerParams scaler{require_numbers(scaler_json, "means", "scaler", schema->width()),
                              require_numbers(scaler_json, "stds", "scaler", schema->width())};
    try {
        data::validate(scaler);
    } catch (const Error& e) {
        corrupt("scaler", e.what());
    }

    const Json& target_json = require(doc, "target", "");
    const auto target = target_json.is_string() ? data::parse_target(target_json.get<std::string>())
                                                : std::optional<data::Target>{};
    if (!target) corrupt("target", "must be person_trips or vehicle_trips");

    const Json& cfg_json = require(doc, "train_config", "");
    train::TrainConfig config;
    try {
        config.batch_size = require(cfg_json, "batch_size", "train_config").get<std::size_t>();
        config.epochs = require(cfg_json, "epochs", "train_config").get<std::size_t>();
        config.learning_rate = require(cfg_json, "learning_rate", "train_config").get<double>();
        config.seed = require(cfg_json, "seed", "train_config").get<std::uint64_t>();
        config.validation_fraction =
            require(cfg_json, "validation_fraction", "train_config").get<double>();
        train::validate(config);
    } catch (const Json::exception& e) {
        corrupt("train_config", e.what());
    } catch (const ArgumentError& e) {
        corrupt("train_config", e.what());
    }

    if (doc.contains("total_params")) {
        const Json& tp = doc["total_params"];
        if (!tp.is_number_unsigned() || tp.get<std::size_t>() != nn::param_count(*network).total) {
            corrupt("total_params", "does not match the layer dimensions");
        }
    }
    if (doc.contains("created_at") && !doc["created_at"].is_string()) {
        corrupt("created_at", "must be an RFC 3339 string");
    }

    return train::TrainedModel{std::move(*network), std::move(scaler), std::move(*schema), *target,
                               train::LossCurve{}, config};
}

void save(const train::TrainedModel& model, const std::filesystem::path& destination,
          const SaveOptions& options) {
    io::write_file_atomic(destination, to_json(model, options));
}

train::TrainedModel load(const std::filesystem::path& source) {
    std::ifstream in(source, std::ios::binary);
    if (!in) {
        throw IoError("cannot open model '" + source.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

}  // namespace tripnet::store
