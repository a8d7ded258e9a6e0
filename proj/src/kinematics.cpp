#include "weedplan/kinematics.hpp"

#include "weedplan/errors.hpp"

#include <cmath>

namespace weedplan {

std::string to_string(MotionProfile profile) {
    return profile == MotionProfile::constant_velocity ? "constant_velocity" : "trapezoidal";
}

MotionProfile parse_motion_profile(const std::string &text) {
    if (text == "constant_velocity") {
        return MotionProfile::constant_velocity;
    }
    if (text == "trapezoidal") {
        return MotionProfile::trapezoidal;
    }
    throw ConfigError("unknown motion profile '" + text + "'");
}

void ToolRig::validate() const {
    auto positive = [](double v, const char *name) {
        if (!std::isfinite(v) || v <= 0.0) {
            throw ConfigError(std::string(name) + " must be finite and > 0");
        }
    };
    if (num_heads < 1) {
        throw ConfigError("num_heads must be >= 1");
    }
    positive(lane_width_m, "lane_width_m");
    positive(head_max_velocity, "head_max_velocity");
    positive(head_max_accel, "head_max_accel");
    positive(spray_footprint_m, "spray_footprint_m");
    positive(workspace_depth_m, "workspace_depth_m");
    if (!std::isfinite(actuation_latency_s) || actuation_latency_s < 0.0) {
        throw ConfigError("actuation_latency_s must be finite and >= 0");
    }
    if (!std::isfinite(camera_tool_gap_m) || camera_tool_gap_m < 0.0) {
        throw ConfigError("camera_tool_gap_m must be finite and >= 0");
    }
    if (spray_footprint_m > lane_width_m / num_heads) {
        throw ConfigError("spray_footprint_m exceeds lane_width_m / num_heads");
    }
}

double ToolRig::rest_position(int head) const { return (head + 0.5) * lane_width_m / num_heads; }

double lateral_distance(const HeadState &head, const PlantInstance &weed) { return std::abs(head.y_position - weed.y); }

bool feasible(double dx, double dy, double robot_speed, double axis_speed) {
    if (dy == 0.0) {
        return dx >= 0.0;
    }
    return robot_speed * dy < axis_speed * dx;
}

double head_travel_time(double dy, double max_velocity, double max_accel, MotionProfile profile) {
    if (dy <= 0.0) {
        return 0.0;
    }
    if (profile == MotionProfile::constant_velocity) {
        return dy / max_velocity;
    }
    // Full trapezoid once the move is long enough to reach cruise speed.
    if (dy >= max_velocity * max_velocity / max_accel) {
        return dy / max_velocity + max_velocity / max_accel;
    }
    return 2.0 * std::sqrt(dy / max_accel);
}

double weed_arrival_time(const PlantInstance &weed, const RobotState &robot) {
    const double dx = weed.x - robot.toolline_x;
    if (dx < 0.0) {
        throw PastTargetError("plant " + std::to_string(weed.id) + " is " + format_double(-dx) +
                              " m behind the tool line");
    }
    return dx / robot.forward_speed;
}

} // namespace weedplan
