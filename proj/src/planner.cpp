#include "weedplan/planner.hpp"

#include "weedplan/errors.hpp"
#include "weedplan/kinematics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>

namespace weedplan {

namespace {

bool better(const Trajectory &a, const Trajectory &b) {
    if (a.visited_count != b.visited_count) {
        return a.visited_count > b.visited_count;
    }
    if (a.movement_cost != b.movement_cost) {
        return a.movement_cost < b.movement_cost;
    }
    return a.visit_order < b.visit_order;
}

std::vector<TargetNode> spatially_sorted(std::span<const TargetNode> nodes) {
    std::vector<TargetNode> out(nodes.begin(), nodes.end());
    std::sort(out.begin(), out.end(), [](const TargetNode &a, const TargetNode &b) {
        if (a.x != b.x) {
            return a.x < b.x;
        }
        if (a.y != b.y) {
            return a.y < b.y;
        }
        return a.node_id < b.node_id;
    });
    return out;
}

double pruned_cost(std::span<const TargetNode> order, const std::vector<bool> &mask, double start_y) {
    std::vector<double> ys;
    ys.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (mask[i]) {
            ys.push_back(order[i].y);
        }
    }
    return movement_cost(ys, start_y);
}

Trajectory finish(std::span<const TargetNode> order, HeadStart start, Kinematics kin, PlannerKind kind) {
    Trajectory t;
    t.planner = kind;
    t.visit_order.reserve(order.size());
    for (const auto &n : order) {
        t.visit_order.push_back(n.node_id);
    }
    auto pruned = prune_infeasible(order, start, kin);
    t.movement_cost = pruned_cost(order, pruned.feasible_mask, start.y);
    t.feasible_mask = std::move(pruned.feasible_mask);
    t.visited_count = pruned.visited_count;
    return t;
}

} // namespace

std::string to_string(PlannerKind kind) { return kind == PlannerKind::brute_force ? "brute_force" : "notsp"; }

PlannerKind parse_planner(const std::string &text) {
    if (text == "brute_force") {
        return PlannerKind::brute_force;
    }
    if (text == "notsp") {
        return PlannerKind::notsp;
    }
    throw ConfigError("unknown planner '" + text + "' (expected brute_force or notsp)");
}

std::vector<int> Trajectory::visited_nodes() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < visit_order.size(); ++i) {
        if (feasible_mask[i]) {
            out.push_back(visit_order[i]);
        }
    }
    return out;
}

PruneResult prune_infeasible(std::span<const TargetNode> order, HeadStart start, Kinematics kin) {
    PruneResult out;
    out.feasible_mask.assign(order.size(), false);
    double cur_x = start.toolline_x;
    double cur_y = start.y;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto &n = order[i];
        const double dx = n.x - cur_x;
        if (dx > 0.0 && feasible(dx, std::abs(n.y - cur_y), kin.robot_speed, kin.axis_speed)) {
            out.feasible_mask[i] = true;
            ++out.visited_count;
            cur_x = n.x;
            cur_y = n.y;
        }
    }
    return out;
}

double movement_cost(std::span<const double> visit_y, double start_y) {
    double cost = 0.0;
    double prev = start_y;
    for (double y : visit_y) {
        cost += (prev - y) * (prev - y);
        prev = y;
    }
    return cost;
}

const Trajectory &select_trajectory(std::span<const Trajectory> candidates) {
    if (candidates.empty()) {
        throw std::invalid_argument("select_trajectory: no candidates");
    }
    const Trajectory *best = &candidates.front();
    for (const auto &c : candidates.subspan(1)) {
        if (better(c, *best)) {
            best = &c;
        }
    }
    return *best;
}

Trajectory plan_brute_force(std::span<const TargetNode> nodes, HeadStart start, Kinematics kin,
                            std::size_t max_nodes) {
    max_nodes = std::min(max_nodes, kBruteForceMaxNodes);
    if (nodes.size() > max_nodes) {
        throw SizeError("brute-force planner limited to " + std::to_string(max_nodes) + " targets per head, got " +
                        std::to_string(nodes.size()) + "; use the notsp planner");
    }

    // Permutations are generated in lexicographic node-id order, so the first
    // exact tie found is already the lexicographically smallest.
    std::vector<TargetNode> perm(nodes.begin(), nodes.end());
    std::sort(perm.begin(), perm.end(), [](const TargetNode &a, const TargetNode &b) { return a.node_id < b.node_id; });

    Trajectory best = finish(perm, start, kin, PlannerKind::brute_force);
    if (perm.size() < 2) {
        return best;
    }
    while (std::next_permutation(perm.begin(), perm.end(),
                                 [](const TargetNode &a, const TargetNode &b) { return a.node_id < b.node_id; })) {
        const auto pruned = prune_infeasible(perm, start, kin);
        if (pruned.visited_count < best.visited_count) {
            continue;
        }
        const double cost = pruned_cost(perm, pruned.feasible_mask, start.y);
        if (pruned.visited_count == best.visited_count && !(cost < best.movement_cost)) {
            continue;
        }
        best = finish(perm, start, kin, PlannerKind::brute_force);
    }
    return best;
}

Trajectory plan_notsp(std::span<const TargetNode> nodes, HeadStart start, Kinematics kin, std::size_t max_nodes) {
    max_nodes = std::min(max_nodes, kNotspMaxNodes);
    if (nodes.size() > max_nodes) {
        throw SizeError("notsp planner limited to " + std::to_string(max_nodes) + " targets per head, got " +
                        std::to_string(nodes.size()) + "; split the segment");
    }

    const auto sorted = spatially_sorted(nodes);
    const auto n = sorted.size();
    const std::uint32_t full = n == 0 ? 0u : static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1);

    // Every visited chain runs strictly forward in x, so a state's last node is
    // always the highest set bit of its subset. cost[mask] < 0 marks an
    // unreachable state.
    std::vector<double> cost(static_cast<std::size_t>(full) + 1, -1.0);
    cost[0] = 0.0;

    std::uint32_t best_mask = 0;
    int best_visits = 0;
    double best_cost = 0.0;
    auto chain_order = [&](std::uint32_t mask) {
        std::vector<int> order;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                order.push_back(sorted[i].node_id);
            }
        }
        std::vector<int> rest;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) {
                rest.push_back(sorted[i].node_id);
            }
        }
        std::sort(rest.begin(), rest.end());
        order.insert(order.end(), rest.begin(), rest.end());
        return order;
    };

    for (std::uint32_t mask = 0; mask <= full; ++mask) {
        const double c = cost[mask];
        if (c < 0.0) {
            continue;
        }
        const int visits = std::popcount(mask);
        if (visits > best_visits || (visits == best_visits && c < best_cost) ||
            (visits == best_visits && c == best_cost && mask != best_mask && chain_order(mask) < chain_order(best_mask))) {
            best_mask = mask;
            best_visits = visits;
            best_cost = c;
        }

        std::size_t first_next = 0;
        double from_x = start.toolline_x;
        double from_y = start.y;
        if (mask != 0) {
            const auto last = static_cast<std::size_t>(std::bit_width(mask) - 1);
            first_next = last + 1;
            from_x = sorted[last].x;
            from_y = sorted[last].y;
        }
        for (std::size_t k = first_next; k < n; ++k) {
            const double dx = sorted[k].x - from_x;
            const double dy = sorted[k].y - from_y;
            if (dx > 0.0 && feasible(dx, std::abs(dy), kin.robot_speed, kin.axis_speed)) {
                cost[mask | (1u << k)] = c + dy * dy;
            }
        }
        if (mask == full) {
            break;
        }
    }

    const auto order_ids = chain_order(best_mask);
    std::vector<TargetNode> order;
    order.reserve(n);
    for (int id : order_ids) {
        order.push_back(*std::find_if(sorted.begin(), sorted.end(), [id](const TargetNode &t) { return t.node_id == id; }));
    }
    return finish(order, start, kin, PlannerKind::notsp);
}

Trajectory plan(PlannerKind kind, std::span<const TargetNode> nodes, HeadStart start, Kinematics kin) {
    return kind == PlannerKind::brute_force ? plan_brute_force(nodes, start, kin) : plan_notsp(nodes, start, kin);
}

void write_plan_line(std::ostream &out, const Trajectory &t, const TargetGraph &graph) {
    out << "head=" << t.head_index << " visits=" << t.visited_count << " cost=" << format_double(t.movement_cost)
        << " order=[";
    for (std::size_t i = 0; i < t.visit_order.size(); ++i) {
        out << (i ? "," : "") << graph.node(t.visit_order[i]).plant_id;
    }
    out << "] mask=[";
    for (std::size_t i = 0; i < t.feasible_mask.size(); ++i) {
        out << (i ? "," : "") << (t.feasible_mask[i] ? 1 : 0);
    }
    out << "]\n";
}

} // namespace weedplan
