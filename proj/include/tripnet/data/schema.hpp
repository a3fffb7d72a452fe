#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tripnet::data {

/// The two response variables.
enum class Target { PersonTrips, VehicleTrips };

std::string_view to_string(Target t) noexcept;
std::optional<Target> parse_target(std::string_view name) noexcept;

/// Ordered feature columns plus the two target columns.
class FeatureSchema {
public:
    /// The 16 household/community features, in model input order.
    static const FeatureSchema& canonical();

    explicit FeatureSchema(std::vector<std::string> features);

    const std::vector<std::string>& features() const noexcept { return features_; }
    std::size_t width() const noexcept { return features_.size(); }
    std::optional<std::size_t> index_of(std::string_view feature) const noexcept;

    /// Features followed by the two target names.
    std::vector<std::string> all_columns() const;

    friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;

private:
    std::vector<std::string> features_;
};

inline constexpr std::array<std::string_view, 2> kTargetNames{"person_trips", "vehicle_trips"};

/// Columns whose blanks the original cleaning step explicitly called out.
/// Reported separately in CleanReport.
inline constexpr std::array<std::string_view, 5> kRequiredColumns{
    "urban_group", "person_trips", "vehicle_trips", "hh_count", "hh_income"};

}  // namespace tripnet::data
