#include "weedplan/target_graph.hpp"

#include "weedplan/errors.hpp"
#include "weedplan/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace weedplan {

std::string to_string(CostMetric metric) { return metric == CostMetric::lateral_sq ? "lateral_sq" : "euclidean_sq"; }

CostMetric parse_cost_metric(const std::string &text) {
    if (text == "lateral_sq") {
        return CostMetric::lateral_sq;
    }
    if (text == "euclidean_sq") {
        return CostMetric::euclidean_sq;
    }
    throw ConfigError("unknown cost metric '" + text + "'");
}

TargetGraph::TargetGraph(std::span<const PlantInstance> weeds, Kinematics kin, CostMetric metric)
    : kin_(kin), metric_(metric) {
    std::vector<PlantInstance> sorted;
    sorted.reserve(weeds.size());
    for (const auto &p : weeds) {
        if (p.kind != PlantKind::weed) {
            throw ValidationError("target graph accepts weeds only, plant " + std::to_string(p.id) + " is a crop");
        }
        sorted.push_back(p);
    }
    sort_plants(sorted);

    nodes_.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        nodes_.push_back({static_cast<int>(i), sorted[i].id, sorted[i].x, sorted[i].y});
    }

    const auto n = nodes_.size();
    cost_.assign(n * n, std::numeric_limits<double>::quiet_NaN());
    feasible_.assign(n * n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
            const double dy = nodes_[j].y - nodes_[k].y;
            const double dx = nodes_[k].x - nodes_[j].x;
            const double c = metric_ == CostMetric::lateral_sq ? dy * dy : dy * dy + dx * dx;
            cost_[j * n + k] = c;
            feasible_[j * n + k] = feasible(dx, std::abs(dy), kin_.robot_speed, kin_.axis_speed) ? 1 : 0;
        }
    }
}

bool TargetGraph::has_link(int from, int to) const {
    return from >= 0 && to >= 0 && from < to && static_cast<std::size_t>(to) < nodes_.size();
}

std::size_t TargetGraph::link_count() const { return nodes_.size() * (nodes_.size() - (nodes_.empty() ? 0 : 1)) / 2; }

std::optional<double> TargetGraph::cost(int from, int to) const {
    if (!has_link(from, to)) {
        return std::nullopt;
    }
    return cost_[index(from, to)];
}

bool TargetGraph::link_feasible(int from, int to) const { return has_link(from, to) && feasible_[index(from, to)] != 0; }

void TargetGraph::write_edge_list(std::ostream &out) const {
    const auto n = static_cast<int>(nodes_.size());
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            out << j << " -> " << k << " [cost=" << format_double(cost_[index(j, k)])
                << ", feasible=" << (feasible_[index(j, k)] ? 1 : 0) << "]\n";
        }
    }
}

TargetGraph build_graph(std::span<const PlantInstance> weeds, Kinematics kin, CostMetric metric) {
    return TargetGraph(weeds, kin, metric);
}

} // namespace weedplan
