#include "weedplan/simulator.hpp"

#include "weedplan/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <ostream>

namespace weedplan {

namespace {

constexpr double kEps = 1e-12;

struct PendingTarget {
    std::size_t weed = 0;
    bool visit = false; // part of the head's feasible chain
    double active_from = 0.0;
};

struct Head {
    double y = 0.0;
    double v = 0.0;
    double settled_since = -std::numeric_limits<double>::infinity();
    double travel = 0.0;
    std::deque<PendingTarget> queue;
    // End of the last planned chain, used as the next plan's start.
    double tail_y = 0.0;
    double tail_x = 0.0;
    std::size_t pending_visits = 0;
};

const PendingTarget *current_target(const Head &head, double t) {
    for (const auto &p : head.queue) {
        if (p.visit) {
            return p.active_from <= t + kEps ? &p : nullptr;
        }
    }
    return nullptr;
}

// Advances one head by dt towards target_y (or towards rest when there is no
// target). Returns the distance moved.
double step_head(Head &head, const PendingTarget *target, double target_y, const ToolRig &rig, MotionProfile profile,
                 double dt) {
    const double before = head.y;
    if (profile == MotionProfile::constant_velocity) {
        if (target != nullptr) {
            const double d = target_y - head.y;
            const double max_step = rig.head_max_velocity * dt;
            head.y = std::abs(d) <= max_step ? target_y : head.y + std::copysign(max_step, d);
        }
        return std::abs(head.y - before);
    }

    const double dv_max = rig.head_max_accel * dt;
    if (target == nullptr) {
        head.v = std::abs(head.v) <= dv_max ? 0.0 : head.v - std::copysign(dv_max, head.v);
    } else {
        const double d = target_y - head.y;
        if (std::abs(d) < kEps && std::abs(head.v) <= dv_max) {
            head.y = target_y;
            head.v = 0.0;
            return std::abs(head.y - before);
        }
        const double v_des =
            std::copysign(std::min(rig.head_max_velocity, std::sqrt(2.0 * rig.head_max_accel * std::abs(d))), d);
        head.v += std::clamp(v_des - head.v, -dv_max, dv_max);
        const double next = head.y + head.v * dt;
        if ((target_y - next) * d <= 0.0) {
            // Crossing the target this step: land on it.
            head.y = target_y;
            head.v = 0.0;
            return std::abs(head.y - before);
        }
        head.y = next;
    }
    head.y = std::clamp(head.y, 0.0, rig.lane_width_m);
    return std::abs(head.y - before);
}

double mean(const std::vector<double> &v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_std(const std::vector<double> &v) {
    if (v.empty()) {
        return 0.0;
    }
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) {
        acc += (x - m) * (x - m);
    }
    return std::sqrt(acc / static_cast<double>(v.size()));
}

} // namespace

void SimulationConfig::validate() const {
    rig.validate();
    validate_field(field);
    if (!std::isfinite(robot_speed) || robot_speed <= 0.0) {
        throw ConfigError("robot_speed must be finite and > 0");
    }
    if (!std::isfinite(segment_length_m) || segment_length_m <= 0.0) {
        throw ConfigError("segment_length_m must be finite and > 0");
    }
    if (!std::isfinite(time_step_s) || time_step_s <= 0.0) {
        throw ConfigError("time_step_s must be finite and > 0");
    }
    if (!std::isfinite(latency_budget_s) || latency_budget_s < 0.0) {
        throw ConfigError("latency_budget_s must be finite and >= 0");
    }
    if (latency_budget_s > rig.camera_tool_gap_m / robot_speed) {
        throw ConfigError("latency_budget_s exceeds camera_tool_gap_m / robot_speed: plans would activate after "
                          "their targets reach the tools");
    }
    if (std::abs(field.lane_width_m - rig.lane_width_m) > 1e-9) {
        throw ConfigError("field lane width " + format_double(field.lane_width_m) + " differs from rig lane width " +
                          format_double(rig.lane_width_m));
    }
    if (max_plan_nodes < 1) {
        throw ConfigError("max_plan_nodes must be >= 1");
    }
    const std::size_t cap = planner == PlannerKind::brute_force ? kBruteForceMaxNodes : kNotspMaxNodes;
    if (max_plan_nodes > cap) {
        throw ConfigError("max_plan_nodes " + std::to_string(max_plan_nodes) + " exceeds the " + to_string(planner) +
                          " limit of " + std::to_string(cap));
    }
}

SimulationReport run(const SimulationConfig &config) {
    config.validate();

    const auto &rig = config.rig;
    const auto weeds = config.field.weeds(); // spatially sorted
    const double gap = rig.camera_tool_gap_m;
    const double speed = config.robot_speed;
    const double dt = config.time_step_s;
    const Kinematics kin{speed, rig.head_max_velocity};
    const auto num_heads = static_cast<std::size_t>(rig.num_heads);

    SimulationReport report;
    report.total_weeds = weeds.size();

    std::vector<Head> heads(num_heads);
    for (std::size_t h = 0; h < num_heads; ++h) {
        heads[h].y = rig.rest_position(static_cast<int>(h));
        heads[h].tail_y = heads[h].y;
        heads[h].tail_x = -gap;
    }
    std::vector<int> owner(weeds.size(), -1);

    // Segment boundaries over the sorted weed list.
    std::vector<std::size_t> seg_begin;
    {
        std::size_t i = 0;
        for (std::int64_t k = 0; i < weeds.size(); ++k) {
            seg_begin.push_back(i);
            const double end_x = static_cast<double>(k + 1) * config.segment_length_m;
            while (i < weeds.size() && weeds[i].x < end_x) {
                ++i;
            }
        }
        seg_begin.push_back(weeds.size());
    }
    const std::size_t num_segments = seg_begin.size() - 1;
    report.segments = num_segments;

    auto plan_segment = [&](std::size_t k, double t_now) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::span<const PlantInstance> seg(weeds.data() + seg_begin[k], seg_begin[k + 1] - seg_begin[k]);
        const TargetGraph graph(seg, kin, config.cost_metric);

        std::vector<HeadState> states(num_heads);
        for (std::size_t h = 0; h < num_heads; ++h) {
            states[h] = {static_cast<int>(h), heads[h].y, t_now};
        }
        const auto assignment = assign(config.strategy, graph, states, rig.lane_width_m);

        const double active_from = t_now + config.latency_budget_s;
        const double active_toolline = -gap + speed * active_from;
        for (std::size_t h = 0; h < num_heads; ++h) {
            auto &head = heads[h];
            const auto &ids = assignment.per_head[h];
            HeadStart start{head.y, active_toolline};
            if (head.pending_visits > 0) {
                start = {head.tail_y, std::max(head.tail_x, active_toolline)};
            }
            for (std::size_t c = 0; c < ids.size(); c += config.max_plan_nodes) {
                const auto chunk_end = std::min(ids.size(), c + config.max_plan_nodes);
                std::vector<TargetNode> nodes;
                for (std::size_t i = c; i < chunk_end; ++i) {
                    nodes.push_back(graph.node(ids[i]));
                }
                Trajectory traj = plan(config.planner, nodes, start, kin);
                traj.head_index = static_cast<int>(h);
                const auto visited = traj.visited_nodes();
                for (const auto &n : nodes) {
                    const bool visit = std::find(visited.begin(), visited.end(), n.node_id) != visited.end();
                    const std::size_t weed_index = seg_begin[k] + static_cast<std::size_t>(n.node_id);
                    head.queue.push_back({weed_index, visit, active_from});
                    owner[weed_index] = static_cast<int>(h);
                    if (visit) {
                        ++head.pending_visits;
                        start = {n.y, n.x};
                        head.tail_y = n.y;
                        head.tail_x = n.x;
                    }
                }
            }
        }
        report.wall_clock_planning_s +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    std::size_t next_segment = 0;
    std::size_t next_arrival = 0;
    const double half_footprint = rig.spray_footprint_m / 2.0;
    for (std::int64_t step = 0; next_arrival < weeds.size(); ++step) {
        const double t = static_cast<double>(step) * dt;
        while (next_segment < num_segments &&
               static_cast<double>(next_segment) * config.segment_length_m / speed <= t + kEps) {
            plan_segment(next_segment, t);
            ++next_segment;
        }

        const double t_next = static_cast<double>(step + 1) * dt;
        for (auto &head : heads) {
            const auto *target = current_target(head, t);
            const double target_y = target ? weeds[target->weed].y : head.y;
            const double moved = step_head(head, target, target_y, rig, config.motion_profile, dt);
            if (moved > 0.0) {
                head.travel += moved;
                head.settled_since = t_next;
            }
        }

        const double toolline = -gap + speed * t_next;
        while (next_arrival < weeds.size() && weeds[next_arrival].x <= toolline + kEps) {
            const auto &weed = weeds[next_arrival];
            const int h = owner[next_arrival];
            SimEvent ev;
            ev.t_s = t_next;
            ev.head = h;
            ev.node = weed.id;
            ev.weed_y = weed.y;
            ev.outcome = Outcome::missed;
            if (h >= 0) {
                auto &head = heads[static_cast<std::size_t>(h)];
                ev.head_y = head.y;
                const auto *target = current_target(head, t_next);
                if (target != nullptr && target->weed == next_arrival &&
                    std::abs(head.y - weed.y) <= half_footprint + kEps &&
                    t_next - head.settled_since >= rig.actuation_latency_s - kEps) {
                    ev.outcome = Outcome::sprayed;
                }
                auto it = std::find_if(head.queue.begin(), head.queue.end(),
                                       [&](const PendingTarget &p) { return p.weed == next_arrival; });
                if (it != head.queue.end()) {
                    if (it->visit) {
                        --head.pending_visits;
                    }
                    head.queue.erase(it);
                }
            }
            if (ev.outcome == Outcome::sprayed) {
                ++report.sprayed;
            } else {
                ++report.missed;
            }
            report.event_log.push_back(ev);
            ++next_arrival;
        }
    }

    report.loss_pct = report.total_weeds == 0
                          ? 0.0
                          : 100.0 * static_cast<double>(report.missed) / static_cast<double>(report.total_weeds);
    for (const auto &head : heads) {
        report.per_head_travel_m.push_back(head.travel);
    }
    report.travel_mean_m = mean(report.per_head_travel_m);
    report.travel_std_m = population_std(report.per_head_travel_m);
    return report;
}

SimulationReport replay_real(const std::filesystem::path &field_path, SimulationConfig config) {
    config.field = load_field(field_path);
    auto report = run(config);
    try {
        report.uniformity = uniformity_test(config.field, config.uniformity_bins_x, config.uniformity_bins_y);
    } catch (const InsufficientDataError &) {
        report.uniformity.reset();
    }
    return report;
}

std::string to_string(Outcome outcome) { return outcome == Outcome::sprayed ? "sprayed" : "missed"; }

void write_event_log(std::ostream &out, const std::vector<SimEvent> &events) {
    for (const auto &e : events) {
        nlohmann::ordered_json j;
        j["v"] = 1;
        j["t_s"] = e.t_s;
        j["head"] = e.head;
        j["node"] = e.node;
        j["outcome"] = to_string(e.outcome);
        j["head_y"] = e.head_y;
        j["weed_y"] = e.weed_y;
        out << j.dump() << '\n';
    }
}

std::string report_json(const SimulationReport &report, bool include_timing) {
    nlohmann::ordered_json j;
    j["total_weeds"] = report.total_weeds;
    j["sprayed"] = report.sprayed;
    j["missed"] = report.missed;
    j["loss_pct"] = report.loss_pct;
    j["per_head_travel_m"] = report.per_head_travel_m;
    j["travel_mean_m"] = report.travel_mean_m;
    j["travel_std_m"] = report.travel_std_m;
    j["segments"] = report.segments;
    if (report.uniformity) {
        j["uniformity"] = {{"statistic", report.uniformity->statistic},
                           {"degrees_of_freedom", report.uniformity->degrees_of_freedom},
                           {"critical_value", report.uniformity->critical_value},
                           {"uniform_at_5pct", report.uniformity->uniform_at_5pct}};
    }
    if (include_timing) {
        j["planning_wall_s"] = report.wall_clock_planning_s;
    }
    return j.dump(2);
}

} // namespace weedplan
