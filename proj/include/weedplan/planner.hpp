#pragma once

#include "weedplan/target_graph.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace weedplan {

enum class PlannerKind { brute_force, notsp };

std::string to_string(PlannerKind kind);
PlannerKind parse_planner(const std::string &text);

inline constexpr std::size_t kBruteForceMaxNodes = 10;
inline constexpr std::size_t kNotspMaxNodes = 24;

/// Where a head starts a plan: its lateral position and the tool-line x at
/// which it is free to move. Target x values share the tool-line frame.
struct HeadStart {
    double y = 0.0;
    double toolline_x = 0.0;
};

struct Trajectory {
    int head_index = 0;
    std::vector<int> visit_order; // node ids; a permutation of the head's nodes
    std::vector<bool> feasible_mask;
    int visited_count = 0;
    double movement_cost = 0.0;
    PlannerKind planner = PlannerKind::notsp;

    /// Node ids of the visited targets, in visiting order.
    std::vector<int> visited_nodes() const;
};

struct PruneResult {
    std::vector<bool> feasible_mask;
    int visited_count = 0;
};

/// Greedy scan of a candidate order. A node is kept when it lies strictly
/// ahead of the last kept position and the lateral move to it passes the
/// reachability predicate; a rejected node does not move the head.
PruneResult prune_infeasible(std::span<const TargetNode> order, HeadStart start, Kinematics kin);

/// Sum of squared lateral moves, starting with the approach from start_y.
double movement_cost(std::span<const double> visit_y, double start_y);

/// Most visits, then least movement cost, then smallest visit order.
const Trajectory &select_trajectory(std::span<const Trajectory> candidates);

/// Exhaustive search over all N! visiting orders. Throws SizeError above
/// max_nodes (at most kBruteForceMaxNodes).
Trajectory plan_brute_force(std::span<const TargetNode> nodes, HeadStart start, Kinematics kin,
                            std::size_t max_nodes = kBruteForceMaxNodes);

/// Open-loop TSP by dynamic programming over (visited subset, last node)
/// states. Transitions follow the spatial order only, and a state's value is
/// (visits, cost) compared lexicographically, so the returned plan is the
/// exact optimum of the same objective as plan_brute_force.
Trajectory plan_notsp(std::span<const TargetNode> nodes, HeadStart start, Kinematics kin,
                      std::size_t max_nodes = kNotspMaxNodes);

Trajectory plan(PlannerKind kind, std::span<const TargetNode> nodes, HeadStart start, Kinematics kin);

/// `head=<i> visits=<k> cost=<c> order=[id,...] mask=[0|1,...]`. Ids are
/// plant ids looked up through the graph.
void write_plan_line(std::ostream &out, const Trajectory &trajectory, const TargetGraph &graph);

} // namespace weedplan
