#pragma once

#include <cstdint>

#include "tripnet/data/clean.hpp"
#include "tripnet/data/dataset.hpp"
#include "tripnet/data/synth.hpp"

namespace tripnet::testing {

struct SyntheticSet {
    data::Dataset raw;
    data::ScalerParams scaler;
    data::Dataset scaled;
};

inline SyntheticSet synthetic_set(std::size_t n, std::uint64_t seed, double noise_sd = 0.02,
                                  data::Target target = data::Target::PersonTrips) {
    const auto& schema = data::FeatureSchema::canonical();
    const auto cleaned = data::clean(data::synthesize(n, seed, noise_sd), schema);
    data::Dataset raw = data::assemble(cleaned.table, schema, target);
    data::ScalerParams scaler = data::fit_scaler(raw);
    data::Dataset scaled = data::apply_scaler(raw, scaler);
    return {std::move(raw), std::move(scaler), std::move(scaled)};
}

}  // namespace tripnet::testing
