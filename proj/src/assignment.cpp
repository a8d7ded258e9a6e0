#include "weedplan/assignment.hpp"

#include "weedplan/errors.hpp"

#include <algorithm>
#include <cmath>

namespace weedplan {

namespace {

int division_index(double offset, double width, int num_heads) {
    const auto i = static_cast<int>(std::floor(offset * num_heads / width));
    return std::clamp(i, 0, num_heads - 1);
}

std::vector<std::pair<double, double>> even_regions(double lo, double hi, int num_heads) {
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(num_heads));
    const double w = hi - lo;
    for (int i = 0; i < num_heads; ++i) {
        out.emplace_back(lo + i * w / num_heads, i + 1 == num_heads ? hi : lo + (i + 1) * w / num_heads);
    }
    return out;
}

int nearest(double y, std::span<const double> positions) {
    int best = 0;
    double best_d = std::abs(positions[0] - y);
    for (std::size_t i = 1; i < positions.size(); ++i) {
        const double d = std::abs(positions[i] - y);
        if (d < best_d) {
            best = static_cast<int>(i);
            best_d = d;
        }
    }
    return best;
}

void require_heads(int num_heads) {
    if (num_heads < 1) {
        throw ConfigError("assignment needs at least one head");
    }
}

} // namespace

std::string to_string(Strategy strategy) {
    switch (strategy) {
    case Strategy::D:
        return "D";
    case Strategy::SD:
        return "SD";
    case Strategy::DD:
        return "DD";
    }
    return "?";
}

Strategy parse_strategy(const std::string &text) {
    if (text == "D") {
        return Strategy::D;
    }
    if (text == "SD") {
        return Strategy::SD;
    }
    if (text == "DD") {
        return Strategy::DD;
    }
    throw ConfigError("unknown strategy '" + text + "' (expected D, SD or DD)");
}

HeadAssignment assign_distance(const TargetGraph &graph, std::span<const HeadState> heads) {
    require_heads(static_cast<int>(heads.size()));
    std::vector<double> positions;
    positions.reserve(heads.size());
    for (const auto &h : heads) {
        positions.push_back(h.y_position);
    }
    HeadAssignment out;
    out.strategy = Strategy::D;
    out.per_head.resize(heads.size());
    for (const auto &n : graph.nodes()) {
        out.per_head[static_cast<std::size_t>(nearest(n.y, positions))].push_back(n.node_id);
    }
    return out;
}

HeadAssignment assign_static_division(const TargetGraph &graph, int num_heads, double lane_width) {
    require_heads(num_heads);
    if (!(lane_width > 0.0)) {
        throw ConfigError("lane width must be > 0");
    }
    HeadAssignment out;
    out.strategy = Strategy::SD;
    out.per_head.resize(static_cast<std::size_t>(num_heads));
    out.region_bounds = even_regions(0.0, lane_width, num_heads);
    for (const auto &n : graph.nodes()) {
        out.per_head[static_cast<std::size_t>(division_index(n.y, lane_width, num_heads))].push_back(n.node_id);
    }
    return out;
}

HeadAssignment assign_dynamic_division(const TargetGraph &graph, int num_heads, double lane_width) {
    require_heads(num_heads);
    HeadAssignment out;
    out.strategy = Strategy::DD;
    out.per_head.resize(static_cast<std::size_t>(num_heads));
    if (graph.empty()) {
        out.region_bounds = std::vector<std::pair<double, double>>(static_cast<std::size_t>(num_heads), {0.0, 0.0});
        return out;
    }

    const auto [lo_it, hi_it] = std::minmax_element(graph.nodes().begin(), graph.nodes().end(),
                                                    [](const TargetNode &a, const TargetNode &b) { return a.y < b.y; });
    const double y_min = lo_it->y;
    const double y_max = hi_it->y;

    if (graph.size() <= 1 || y_max == y_min) {
        std::vector<double> rest;
        for (int i = 0; i < num_heads; ++i) {
            rest.push_back((i + 0.5) * lane_width / num_heads);
        }
        const auto owner = static_cast<std::size_t>(nearest(y_min, rest));
        for (const auto &n : graph.nodes()) {
            out.per_head[owner].push_back(n.node_id);
        }
        std::vector<std::pair<double, double>> bounds(static_cast<std::size_t>(num_heads), {y_min, y_min});
        out.region_bounds = std::move(bounds);
        return out;
    }

    out.region_bounds = even_regions(y_min, y_max, num_heads);
    for (const auto &n : graph.nodes()) {
        out.per_head[static_cast<std::size_t>(division_index(n.y - y_min, y_max - y_min, num_heads))].push_back(
            n.node_id);
    }
    return out;
}

HeadAssignment assign(Strategy strategy, const TargetGraph &graph, std::span<const HeadState> heads,
                      double lane_width) {
    switch (strategy) {
    case Strategy::D:
        return assign_distance(graph, heads);
    case Strategy::SD:
        return assign_static_division(graph, static_cast<int>(heads.size()), lane_width);
    case Strategy::DD:
        return assign_dynamic_division(graph, static_cast<int>(heads.size()), lane_width);
    }
    throw ConfigError("unknown strategy");
}

} // namespace weedplan
