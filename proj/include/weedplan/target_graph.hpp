#pragma once

#include "weedplan/field_model.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace weedplan {

enum class CostMetric { lateral_sq, euclidean_sq };

std::string to_string(CostMetric metric);
CostMetric parse_cost_metric(const std::string &text);

struct TargetNode {
    int node_id = 0; // position in the graph's spatial order
    std::int64_t plant_id = 0;
    double x = 0.0;
    double y = 0.0;
};

struct Kinematics {
    double robot_speed = 0.5; // forward speed of the robot
    double axis_speed = 5.0;  // max lateral speed of a head
};

/// Uni-directional node graph over one segment's weeds. Links run from each
/// node to every node after it in spatial order, so the graph is a complete
/// DAG whose topological order is the sorted order. Link data is stored on
/// the upper triangle of an N x N matrix.
class TargetGraph {
  public:
    TargetGraph() = default;
    TargetGraph(std::span<const PlantInstance> weeds, Kinematics kin, CostMetric metric = CostMetric::lateral_sq);

    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    const std::vector<TargetNode> &nodes() const { return nodes_; }
    const TargetNode &node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }

    bool has_link(int from, int to) const;
    std::size_t link_count() const;

    /// Inter-weed cost; empty for pairs that are not links.
    std::optional<double> cost(int from, int to) const;
    bool link_feasible(int from, int to) const;

    Kinematics kinematics() const { return kin_; }
    CostMetric metric() const { return metric_; }

    /// One line per link: `j -> k [cost=<c>, feasible=0|1]`.
    void write_edge_list(std::ostream &out) const;

  private:
    std::size_t index(int from, int to) const { return static_cast<std::size_t>(from) * nodes_.size() + static_cast<std::size_t>(to); }

    std::vector<TargetNode> nodes_;
    std::vector<double> cost_;
    std::vector<char> feasible_;
    Kinematics kin_;
    CostMetric metric_ = CostMetric::lateral_sq;
};

TargetGraph build_graph(std::span<const PlantInstance> weeds, Kinematics kin,
                        CostMetric metric = CostMetric::lateral_sq);

} // namespace weedplan
