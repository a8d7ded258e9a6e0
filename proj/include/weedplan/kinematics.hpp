#pragma once

#include "weedplan/field_model.hpp"

#include <string>

namespace weedplan {

enum class MotionProfile { constant_velocity, trapezoidal };

std::string to_string(MotionProfile profile);
MotionProfile parse_motion_profile(const std::string &text);

/// Geometry and limits of the linear-axis intervention rig.
///
/// Defaults follow the BonnBot-I weeding tool: 1.3 m lane, 5 m/s and
/// 10 m/s^2 axis limits, 5 cm spray footprint, 12 ms valve latency and a
/// 0.36 m deep tool workspace. The camera-to-tool gap is an assumed value.
struct ToolRig {
    int num_heads = 4;
    double lane_width_m = 1.3;
    double head_max_velocity = 5.0;
    double head_max_accel = 10.0;
    double spray_footprint_m = 0.05;
    double actuation_latency_s = 0.012;
    double camera_tool_gap_m = 0.5;
    double workspace_depth_m = 0.36;

    /// Throws ConfigError when a limit is non-positive or the footprint does
    /// not fit one static sub-division of the lane.
    void validate() const;

    /// Center of head i's static sub-division; heads start a run here.
    double rest_position(int head) const;
};

struct HeadState {
    int head_index = 0;
    double y_position = 0.0;
    double busy_until = 0.0;
};

struct RobotState {
    double forward_speed = 0.5;
    double x_position = 0.0;
    double toolline_x = 0.0;
};

/// Lateral travel a head needs to line up with a plant.
double lateral_distance(const HeadState &head, const PlantInstance &weed);

/// Reachability predicate: a head moving at axis_speed can cover lateral
/// distance dy before the robot, moving at robot_speed, covers forward
/// distance dx. Evaluated as robot_speed*dy < axis_speed*dx, so dy == 0 is
/// always reachable and the boundary case is not.
bool feasible(double dx, double dy, double robot_speed, double axis_speed);

/// Time for a rest-to-rest lateral move of length dy.
double head_travel_time(double dy, double max_velocity, double max_accel, MotionProfile profile);

/// Seconds until the weed reaches the tool line. Throws PastTargetError for
/// weeds already behind it.
double weed_arrival_time(const PlantInstance &weed, const RobotState &robot);

} // namespace weedplan
