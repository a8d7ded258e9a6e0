#pragma once

#include "weedplan/field_model.hpp"

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

namespace weedplan::testing {

/// Weeds confined to the lateral band [y_lo, y_hi], Poisson along x with
/// `per_meter` weeds per meter of lane. Built independently of generate_field.
inline WeedField banded_field(double length, double lane_width, double y_lo, double y_hi, double per_meter,
                              std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> gap(per_meter);
    std::uniform_real_distribution<double> lateral(y_lo, y_hi);
    WeedField f;
    f.lane_width_m = lane_width;
    f.length_m = length;
    f.num_crop_rows = 3;
    std::int64_t id = 0;
    for (double x = gap(rng); x <= length; x += gap(rng)) {
        PlantInstance p;
        p.id = id++;
        p.x = x;
        p.y = lateral(rng);
        p.kind = PlantKind::weed;
        p.species = "weed";
        f.plants.push_back(p);
    }
    sort_plants(f.plants);
    return f;
}

inline PlantInstance weed_at(std::int64_t id, double x, double y) {
    PlantInstance p;
    p.id = id;
    p.x = x;
    p.y = y;
    p.kind = PlantKind::weed;
    p.species = "weed";
    return p;
}

inline std::filesystem::path temp_path(const std::string &name) {
    return std::filesystem::temp_directory_path() / ("weedplan_test_" + name);
}

} // namespace weedplan::testing
