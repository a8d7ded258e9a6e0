#pragma once

#include "weedplan/assignment.hpp"
#include "weedplan/field_model.hpp"
#include "weedplan/kinematics.hpp"
#include "weedplan/planner.hpp"
#include "weedplan/target_graph.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace weedplan {

struct SimulationConfig {
    WeedField field;
    ToolRig rig;
    double robot_speed = 0.5;
    Strategy strategy = Strategy::D;
    PlannerKind planner = PlannerKind::notsp;
    double segment_length_m = 0.78;
    double latency_budget_s = 0.2; // detection + management + planning, lumped
    double time_step_s = 0.001;
    MotionProfile motion_profile = MotionProfile::constant_velocity;
    CostMetric cost_metric = CostMetric::lateral_sq;
    // A head's targets in one segment are planned in consecutive chunks of
    // at most this many nodes, each chunk starting where the previous ends.
    std::size_t max_plan_nodes = 12;
    std::uint64_t seed = 0;
    int uniformity_bins_x = 4;
    int uniformity_bins_y = 2;

    /// Throws ConfigError on any broken invariant.
    void validate() const;
};

enum class Outcome { sprayed, missed };

struct SimEvent {
    double t_s = 0.0;
    int head = 0;
    std::int64_t node = 0; // plant id
    Outcome outcome = Outcome::missed;
    double head_y = 0.0;
    double weed_y = 0.0;

    bool operator==(const SimEvent &) const = default;
};

struct SimulationReport {
    std::size_t total_weeds = 0;
    std::size_t sprayed = 0;
    std::size_t missed = 0;
    double loss_pct = 0.0;
    std::vector<double> per_head_travel_m; // includes the approach moves
    double travel_mean_m = 0.0;
    double travel_std_m = 0.0; // population std over heads
    std::vector<SimEvent> event_log;
    std::size_t segments = 0;
    double wall_clock_planning_s = 0.0;
    std::optional<UniformityVerdict> uniformity;
};

/// Runs one pass over the field.
///
/// The tool line starts gap_m behind x = 0 so the camera's near edge sits on
/// the field start. Segment k holds the weeds in [k*L, (k+1)*L); it is fully
/// in view, and planned, once the robot has advanced k*L. Plans become active
/// latency_budget_s later. Each head executes its visits in order; a weed is
/// sprayed when, as it crosses the tool line, its head is within half the
/// footprint of it and has been stationary for the actuation latency.
SimulationReport run(const SimulationConfig &config);

/// Same engine on a field read from disk; also attaches the uniformity
/// verdict when the field has enough weeds for the configured bins.
SimulationReport replay_real(const std::filesystem::path &field_path, SimulationConfig config);

std::string to_string(Outcome outcome);

/// One JSON object per line, schema version 1.
void write_event_log(std::ostream &out, const std::vector<SimEvent> &events);

/// Deterministic JSON summary; planning wall time is omitted unless asked for.
std::string report_json(const SimulationReport &report, bool include_timing);

} // namespace weedplan
