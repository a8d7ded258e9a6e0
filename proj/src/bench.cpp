#include "weedplan/bench.hpp"

#include "weedplan/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

namespace weedplan {

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Mean time per call, repeating fast calls until at least a millisecond has
// elapsed so the clock resolution does not dominate.
template <typename F> double time_call(F &&f) {
    using clock = std::chrono::steady_clock;
    std::size_t reps = 0;
    const auto t0 = clock::now();
    auto elapsed = clock::duration::zero();
    do {
        f();
        ++reps;
        elapsed = clock::now() - t0;
    } while (elapsed < std::chrono::milliseconds(1));
    return std::chrono::duration<double>(elapsed).count() / static_cast<double>(reps);
}

} // namespace

std::vector<TargetNode> random_instance(std::size_t n, std::uint64_t seed, double lane_width) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> xs(0.4, 1.18);
    std::uniform_real_distribution<double> ys(0.0, lane_width);
    std::vector<TargetNode> nodes(n);
    for (std::size_t i = 0; i < n; ++i) {
        nodes[i].node_id = static_cast<int>(i);
        nodes[i].plant_id = static_cast<std::int64_t>(i);
        nodes[i].x = xs(rng);
        nodes[i].y = ys(rng);
    }
    return nodes;
}

BenchResult run_planner_bench(std::size_t n, std::size_t trials, std::uint64_t seed) {
    if (n > kBruteForceMaxNodes) {
        throw SizeError("bench size " + std::to_string(n) + " exceeds the brute-force limit of " +
                        std::to_string(kBruteForceMaxNodes));
    }
    if (trials == 0) {
        throw ParameterError("trials must be >= 1");
    }
    const Kinematics kin{0.5, 5.0};
    std::mt19937_64 seeds(seed);
    std::vector<double> brute;
    std::vector<double> notsp;
    BenchResult r;
    r.n = n;
    r.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto nodes = random_instance(n, seeds());
        const HeadStart start{0.65, 0.0};
        Trajectory bf;
        Trajectory dp;
        brute.push_back(time_call([&] { bf = plan_brute_force(nodes, start, kin); }));
        notsp.push_back(time_call([&] { dp = plan_notsp(nodes, start, kin); }));
        if (bf.visited_count != dp.visited_count ||
            std::abs(bf.movement_cost - dp.movement_cost) > 1e-9 * std::max(1.0, std::abs(bf.movement_cost))) {
            r.plans_agree = false;
        }
    }
    r.median_brute_force_s = median(brute);
    r.median_notsp_s = median(notsp);
    r.ratio = r.median_notsp_s > 0.0 ? r.median_brute_force_s / r.median_notsp_s : 0.0;
    return r;
}

} // namespace weedplan
