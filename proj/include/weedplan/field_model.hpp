#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace weedplan {

enum class PlantKind { crop, weed };

std::string to_string(PlantKind kind);

/// One detected or generated plant. Coordinates are in the lane frame:
/// x along the driving direction, y across the lane in [0, lane width].
struct PlantInstance {
    std::int64_t id = 0;
    double x = 0.0;
    double y = 0.0;
    PlantKind kind = PlantKind::weed;
    std::string species;
    double area = 0.0;

    bool operator==(const PlantInstance &) const = default;
};

/// Total order used everywhere plants or targets are sorted: x, then y, then id.
bool spatial_less(const PlantInstance &a, const PlantInstance &b);

struct WeedField {
    double lane_width_m = 1.3;
    double length_m = 20.0;
    int num_crop_rows = 3;
    std::vector<PlantInstance> plants;

    // Provenance; only set for generated fields.
    std::optional<double> density_param;
    std::optional<std::uint64_t> seed;

    std::vector<PlantInstance> weeds() const;
    std::size_t weed_count() const;

    bool operator==(const WeedField &) const = default;
};

struct FieldParams {
    double lambda = 10.0;       // weeds per square meter
    double length_m = 20.0;
    double lane_width_m = 1.3;
    int num_crop_rows = 3;
    double crop_spacing_m = 0.15;
    std::uint64_t seed = 0;
};

/// Poisson field: weed x-gaps are exponential with rate lambda * lane_width,
/// weed y is uniform over the lane. Crops sit on equally spaced row lines.
WeedField generate_field(const FieldParams &params);

/// Throws ValidationError if any invariant of the field is broken.
void validate_field(const WeedField &field);

/// Sorts plants into the canonical spatial order.
void sort_plants(std::vector<PlantInstance> &plants);

WeedField parse_field(std::istream &in);
WeedField load_field(const std::filesystem::path &path);
void write_field(std::ostream &out, const WeedField &field);
void save_field(const std::filesystem::path &path, const WeedField &field);

struct UniformityVerdict {
    double statistic = 0.0;
    int degrees_of_freedom = 0;
    double critical_value = 0.0;
    bool uniform_at_5pct = false;
};

/// Pearson chi-squared test of weed positions against a uniform density over
/// a num_bins_x by num_bins_y grid spanning the whole field.
UniformityVerdict uniformity_test(const WeedField &field, int num_bins_x, int num_bins_y);

/// Upper 5% critical value of the chi-squared distribution.
double chi_squared_critical_5pct(int degrees_of_freedom);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

} // namespace weedplan
