#include "tripnet/data/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "tripnet/error.hpp"
#include "tripnet/numerics/rng.hpp"

namespace tripnet::data {
namespace {

// Household size distribution over 1..6 persons.
constexpr std::array<double, 6> kSizeWeights{0.28, 0.34, 0.15, 0.13, 0.06, 0.04};

std::size_t draw_household_size(Rng& rng) {
    double u = rng.uniform01();
    for (std::size_t i = 0; i < kSizeWeights.size(); ++i) {
        if (u < kSizeWeights[i]) return i + 1;
        u -= kSizeWeights[i];
    }
    return kSizeWeights.size();
}

double as_flag(bool b) { return b ? 1.0 : 0.0; }

const TruthFunction kPersonTruth{
    1.5,
    {{"hh_count", 2.2},
     {"workers_1", 1.0},
     {"workers_2p", 0.8},
     {"hh_veh_1", 0.6},
     {"hh_veh_2p", 0.5},
     {"lc_child_u18", 0.4},
     {"lc_2p_u65", 0.3}},
    "hh_count",
    "hh_income",
    0.05,
};

const TruthFunction kVehicleTruth{
    0.6,
    {{"hh_count", 0.7},
     {"workers_1", 1.2},
     {"workers_2p", 1.0},
     {"hh_veh_1", 1.5},
     {"hh_veh_2p", 1.1},
     {"lc_child_u18", 0.2},
     {"lc_1p_u65", 0.3}},
    "hh_veh_2p",
    "hh_income",
    0.04,
};

std::size_t feature_index(const FeatureSchema& schema, std::string_view name) {
    const auto idx = schema.index_of(name);
    if (!idx) {
        throw SchemaError("truth function needs feature '" + std::string(name) + "'");
    }
    return *idx;
}

}  // namespace

double TruthFunction::evaluate(const FeatureSchema& schema, std::span<const double> row) const {
    if (row.size() != schema.width()) {
        throw ShapeError("truth function: row has " + std::to_string(row.size()) +
                         " values, schema has " + std::to_string(schema.width()));
    }
    double y = intercept;
    for (const auto& term : linear) {
        y += term.coef * row[feature_index(schema, term.feature)];
    }
    y += interaction_coef * row[feature_index(schema, interaction_a)] *
         row[feature_index(schema, interaction_b)];
    return y;
}

std::vector<double> TruthFunction::evaluate(const FeatureSchema& schema, const Matrix& features) const {
    std::vector<double> out;
    out.reserve(features.rows());
    for (std::size_t i = 0; i < features.rows(); ++i) {
        out.push_back(evaluate(schema, features.row(i)));
    }
    return out;
}

std::string TruthFunction::describe(std::string_view target_name) const {
    std::ostringstream out;
    out << target_name << " = " << format_number(intercept);
    for (const auto& term : linear) {
        out << " + " << format_number(term.coef) << "*" << term.feature;
    }
    out << " + " << format_number(interaction_coef) << "*" << interaction_a << "*" << interaction_b;
    return out.str();
}

const TruthFunction& truth_function(Target t) {
    return t == Target::PersonTrips ? kPersonTruth : kVehicleTruth;
}

RawTable synthesize(std::size_t n, std::uint64_t seed, double noise_sd) {
    if (n == 0) {
        throw ArgumentError("synthesize: n must be at least 1");
    }
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
        throw ArgumentError("synthesize: noise_sd must be finite and non-negative");
    }
    const FeatureSchema& schema = FeatureSchema::canonical();
    RawTable table;
    table.header = schema.all_columns();
    table.provenance = "synthetic(n=" + std::to_string(n) + ", seed=" + std::to_string(seed) + ")";
    table.rows.reserve(n);

    Rng rng(seed);
    const auto count = [&rng](std::uint64_t lo, std::uint64_t hi) {
        return static_cast<double>(lo + rng.uniform_index(hi - lo + 1));
    };

    std::vector<double> f(schema.width());
    const auto set = [&](std::string_view name, double v) { f[*schema.index_of(name)] = v; };

    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t size = draw_household_size(rng);
        const bool senior = rng.uniform01() < (size == 1 ? 0.4 : 0.25);
        const std::size_t children = size >= 2 ? rng.uniform_index(size) : 0;
        const std::size_t adults = size - children;
        const auto workers = rng.uniform_index(std::min<std::size_t>(adults, 3) + 1);
        const auto vehicles = std::min<std::uint64_t>(4, rng.uniform_index(adults + 2));

        set("hh_veh_0", as_flag(vehicles == 0));
        set("hh_veh_1", as_flag(vehicles == 1));
        set("hh_veh_2p", vehicles >= 2 ? static_cast<double>(vehicles) : 0.0);
        set("workers_1", as_flag(workers == 1));
        set("workers_2p", workers >= 2 ? static_cast<double>(workers) : 0.0);
        set("total_pop", count(2000, 60000));
        set("lc_child_u18", static_cast<double>(children));
        set("lc_1p_u65", as_flag(size == 1 && !senior));
        set("lc_2p_u65", as_flag(size >= 2 && !senior));
        set("lc_1p_65p", as_flag(size == 1 && senior));
        set("lc_2p_65p", as_flag(size >= 2 && senior));
        set("pop_group_quarters", count(0, 1500));
        set("hh_count", static_cast<double>(size));
        set("hh_income", count(1, 11));
        set("cluster", count(1, 6));
        set("urban_group", count(1, 3));

        std::vector<Cell> row(f.begin(), f.end());
        for (Target t : {Target::PersonTrips, Target::VehicleTrips}) {
            const double truth = truth_function(t).evaluate(schema, f);
            const double z = rng.normal();
            row.emplace_back(truth * std::exp(noise_sd * z));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace tripnet::data
