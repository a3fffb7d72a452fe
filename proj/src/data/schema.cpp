#include "tripnet/data/schema.hpp"

#include <algorithm>
#include <set>

#include "tripnet/error.hpp"

namespace tripnet::data {

std::string_view to_string(Target t) noexcept {
    return t == Target::PersonTrips ? kTargetNames[0] : kTargetNames[1];
}

std::optional<Target> parse_target(std::string_view name) noexcept {
    if (name == kTargetNames[0]) return Target::PersonTrips;
    if (name == kTargetNames[1]) return Target::VehicleTrips;
    return std::nullopt;
}

const FeatureSchema& FeatureSchema::canonical() {
    static const FeatureSchema schema({
        "hh_veh_0",      // households with zero vehicles
        "hh_veh_1",      // one vehicle
        "hh_veh_2p",     // two or more vehicles
        "workers_1",     // one worker
        "workers_2p",    // two or more workers
        "total_pop",     // community population (ACS five-year)
        "lc_child_u18",  // life cycle: children under 18
        "lc_1p_u65",     // one person, under 65
        "lc_2p_u65",     // two or more persons, all under 65
        "lc_1p_65p",     // one person, 65 or older
        "lc_2p_65p",     // two or more persons, at least one 65+
        "pop_group_quarters",
        "hh_count",
        "hh_income",     // income category code
        "cluster",       // census region/division code
        "urban_group",   // urbanicity code
    });
    return schema;
}

FeatureSchema::FeatureSchema(std::vector<std::string> features) : features_(std::move(features)) {
    if (features_.empty()) {
        throw SchemaError("feature schema must list at least one column");
    }
    std::set<std::string_view> seen;
    for (const auto& f : features_) {
        if (std::find(kTargetNames.begin(), kTargetNames.end(), f) != kTargetNames.end()) {
            throw SchemaError("feature schema cannot include target column '" + f + "'");
        }
        if (!seen.insert(f).second) {
            throw SchemaError("duplicate feature column '" + f + "'");
        }
    }
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view feature) const noexcept {
    const auto it = std::find(features_.begin(), features_.end(), feature);
    if (it == features_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - features_.begin());
}

std::vector<std::string> FeatureSchema::all_columns() const {
    std::vector<std::string> cols = features_;
    for (auto t : kTargetNames) {
        cols.emplace_back(t);
    }
    return cols;
}

}  // namespace tripnet::data
