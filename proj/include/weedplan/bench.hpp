#pragma once

#include "weedplan/planner.hpp"

#include <cstdint>
#include <vector>

namespace weedplan {

struct BenchResult {
    std::size_t n = 0;
    std::size_t trials = 0;
    double median_brute_force_s = 0.0;
    double median_notsp_s = 0.0;
    double ratio = 0.0; // brute_force / notsp
    bool plans_agree = true; // equal (visits, cost) on every trial
};

/// Random single-head instance: n targets spread over one camera-frame
/// worth of lane ahead of the tool line.
std::vector<TargetNode> random_instance(std::size_t n, std::uint64_t seed, double lane_width = 1.3);

/// Median wall time of each planner over `trials` random instances of size
/// n. Throws SizeError when n exceeds the brute-force limit.
BenchResult run_planner_bench(std::size_t n, std::size_t trials, std::uint64_t seed);

} // namespace weedplan
