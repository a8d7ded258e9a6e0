#pragma once

#include "weedplan/kinematics.hpp"
#include "weedplan/target_graph.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace weedplan {

/// D: nearest head. SD: static lane division. DD: division of the segment's
/// occupied lateral span.
enum class Strategy { D, SD, DD };

std::string to_string(Strategy strategy);
Strategy parse_strategy(const std::string &text);

struct HeadAssignment {
    Strategy strategy = Strategy::D;
    std::vector<std::vector<int>> per_head; // node ids, ascending spatial order
    // [y_lo, y_hi) per head; the last interval is closed. Absent for D.
    std::optional<std::vector<std::pair<double, double>>> region_bounds;

    std::size_t num_heads() const { return per_head.size(); }
};

HeadAssignment assign_distance(const TargetGraph &graph, std::span<const HeadState> heads);
HeadAssignment assign_static_division(const TargetGraph &graph, int num_heads, double lane_width);
/// Falls back to the head whose rest position is laterally nearest when the
/// segment has fewer than two distinct y values.
HeadAssignment assign_dynamic_division(const TargetGraph &graph, int num_heads, double lane_width);

HeadAssignment assign(Strategy strategy, const TargetGraph &graph, std::span<const HeadState> heads,
                      double lane_width);

} // namespace weedplan
