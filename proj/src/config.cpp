#include "weedplan/config.hpp"

#include "weedplan/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace weedplan {

namespace {

std::string trim(const std::string &s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

std::vector<std::string> split_list(const std::string &value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            throw ConfigError("empty list item in '" + value + "'");
        }
        out.push_back(item);
    }
    if (out.empty()) {
        throw ConfigError("empty list");
    }
    return out;
}

template <typename T> T number(const std::string &text) {
    T v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError("invalid number '" + text + "'");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(v)) {
            throw ConfigError("non-finite number '" + text + "'");
        }
    }
    return v;
}

bool boolean(const std::string &text) {
    if (text == "on" || text == "true" || text == "1") {
        return true;
    }
    if (text == "off" || text == "false" || text == "0") {
        return false;
    }
    throw ConfigError("expected on/off, got '" + text + "'");
}

std::vector<std::uint64_t> seed_list(const std::string &value) {
    std::vector<std::uint64_t> out;
    for (const auto &item : split_list(value)) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(number<std::uint64_t>(item));
            continue;
        }
        const auto lo = number<std::uint64_t>(trim(item.substr(0, dots)));
        const auto hi = number<std::uint64_t>(trim(item.substr(dots + 2)));
        if (hi < lo) {
            throw ConfigError("empty seed range '" + item + "'");
        }
        for (auto s = lo; s <= hi; ++s) {
            out.push_back(s);
        }
    }
    return out;
}

template <typename T, typename F> std::string join(const std::vector<T> &v, F f) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? "," : "") + f(v[i]);
    }
    return out;
}

} // namespace

ExperimentConfig default_experiment() {
    ExperimentConfig c;
    c.sim.rig.lane_width_m = c.field_params.lane_width_m;
    c.axes.lambdas = {3, 5, 10, 20, 40};
    c.axes.head_counts = {1, 2, 4, 8};
    c.axes.strategies = {Strategy::D, Strategy::SD, Strategy::DD};
    c.axes.planners = {PlannerKind::notsp};
    for (std::uint64_t s = 1; s <= 20; ++s) {
        c.axes.seeds.push_back(s);
    }
    return c;
}

void apply_setting(ExperimentConfig &c, const std::string &key, const std::string &value) {
    static const std::map<std::string, std::function<void(ExperimentConfig &, const std::string &)>> setters = {
        {"lambda", [](auto &c, auto &v) { c.field_params.lambda = number<double>(v); }},
        {"length_m", [](auto &c, auto &v) { c.field_params.length_m = number<double>(v); }},
        {"lane_width_m",
         [](auto &c, auto &v) { c.field_params.lane_width_m = c.sim.rig.lane_width_m = number<double>(v); }},
        {"num_crop_rows", [](auto &c, auto &v) { c.field_params.num_crop_rows = number<int>(v); }},
        {"crop_spacing_m", [](auto &c, auto &v) { c.field_params.crop_spacing_m = number<double>(v); }},
        {"field", [](auto &c, auto &v) { c.field_path = v; }},
        {"num_heads", [](auto &c, auto &v) { c.sim.rig.num_heads = number<int>(v); }},
        {"head_max_velocity", [](auto &c, auto &v) { c.sim.rig.head_max_velocity = number<double>(v); }},
        {"head_max_accel", [](auto &c, auto &v) { c.sim.rig.head_max_accel = number<double>(v); }},
        {"spray_footprint_m", [](auto &c, auto &v) { c.sim.rig.spray_footprint_m = number<double>(v); }},
        {"actuation_latency_s", [](auto &c, auto &v) { c.sim.rig.actuation_latency_s = number<double>(v); }},
        {"camera_tool_gap_m", [](auto &c, auto &v) { c.sim.rig.camera_tool_gap_m = number<double>(v); }},
        {"workspace_depth_m", [](auto &c, auto &v) { c.sim.rig.workspace_depth_m = number<double>(v); }},
        {"robot_speed", [](auto &c, auto &v) { c.sim.robot_speed = number<double>(v); }},
        {"strategy", [](auto &c, auto &v) { c.sim.strategy = parse_strategy(v); }},
        {"planner", [](auto &c, auto &v) { c.sim.planner = parse_planner(v); }},
        {"segment_length_m", [](auto &c, auto &v) { c.sim.segment_length_m = number<double>(v); }},
        {"latency_budget_s", [](auto &c, auto &v) { c.sim.latency_budget_s = number<double>(v); }},
        {"time_step_s", [](auto &c, auto &v) { c.sim.time_step_s = number<double>(v); }},
        {"motion_profile", [](auto &c, auto &v) { c.sim.motion_profile = parse_motion_profile(v); }},
        {"cost_metric", [](auto &c, auto &v) { c.sim.cost_metric = parse_cost_metric(v); }},
        {"max_plan_nodes", [](auto &c, auto &v) { c.sim.max_plan_nodes = number<std::size_t>(v); }},
        {"seed",
         [](auto &c, auto &v) { c.sim.seed = c.field_params.seed = number<std::uint64_t>(v); }},
        {"uniformity_bins_x", [](auto &c, auto &v) { c.sim.uniformity_bins_x = number<int>(v); }},
        {"uniformity_bins_y", [](auto &c, auto &v) { c.sim.uniformity_bins_y = number<int>(v); }},
        {"lambdas",
         [](auto &c, auto &v) {
             c.axes.lambdas.clear();
             for (const auto &s : split_list(v)) {
                 c.axes.lambdas.push_back(number<double>(s));
             }
         }},
        {"head_counts",
         [](auto &c, auto &v) {
             c.axes.head_counts.clear();
             for (const auto &s : split_list(v)) {
                 c.axes.head_counts.push_back(number<int>(s));
             }
         }},
        {"strategies",
         [](auto &c, auto &v) {
             c.axes.strategies.clear();
             for (const auto &s : split_list(v)) {
                 c.axes.strategies.push_back(parse_strategy(s));
             }
         }},
        {"planners",
         [](auto &c, auto &v) {
             c.axes.planners.clear();
             for (const auto &s : split_list(v)) {
                 c.axes.planners.push_back(parse_planner(s));
             }
         }},
        {"seeds", [](auto &c, auto &v) { c.axes.seeds = seed_list(v); }},
        {"timing", [](auto &c, auto &v) { c.timing = boolean(v); }},
    };
    const auto it = setters.find(key);
    if (it == setters.end()) {
        throw ConfigError("unknown key '" + key + "'");
    }
    it->second(c, value);
}

ExperimentConfig parse_experiment(std::istream &in, ExperimentConfig base) {
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected key = value", line_no);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ParseError("expected key = value", line_no);
        }
        try {
            apply_setting(base, key, value);
        } catch (const ConfigError &e) {
            throw ParseError(e.what(), line_no);
        }
    }
    return base;
}

ExperimentConfig load_experiment(const std::filesystem::path &path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open config file " + path.string(), 0);
    }
    return parse_experiment(in, std::move(base));
}

void write_experiment(std::ostream &out, const ExperimentConfig &c) {
    const auto &fp = c.field_params;
    const auto &sim = c.sim;
    const auto &rig = sim.rig;
    out << "lambda = " << format_double(fp.lambda) << '\n'
        << "length_m = " << format_double(fp.length_m) << '\n'
        << "lane_width_m = " << format_double(fp.lane_width_m) << '\n'
        << "num_crop_rows = " << fp.num_crop_rows << '\n'
        << "crop_spacing_m = " << format_double(fp.crop_spacing_m) << '\n';
    if (c.field_path) {
        out << "field = " << c.field_path->string() << '\n';
    }
    out << "num_heads = " << rig.num_heads << '\n'
        << "head_max_velocity = " << format_double(rig.head_max_velocity) << '\n'
        << "head_max_accel = " << format_double(rig.head_max_accel) << '\n'
        << "spray_footprint_m = " << format_double(rig.spray_footprint_m) << '\n'
        << "actuation_latency_s = " << format_double(rig.actuation_latency_s) << '\n'
        << "camera_tool_gap_m = " << format_double(rig.camera_tool_gap_m) << '\n'
        << "workspace_depth_m = " << format_double(rig.workspace_depth_m) << '\n'
        << "robot_speed = " << format_double(sim.robot_speed) << '\n'
        << "strategy = " << to_string(sim.strategy) << '\n'
        << "planner = " << to_string(sim.planner) << '\n'
        << "segment_length_m = " << format_double(sim.segment_length_m) << '\n'
        << "latency_budget_s = " << format_double(sim.latency_budget_s) << '\n'
        << "time_step_s = " << format_double(sim.time_step_s) << '\n'
        << "motion_profile = " << to_string(sim.motion_profile) << '\n'
        << "cost_metric = " << to_string(sim.cost_metric) << '\n'
        << "max_plan_nodes = " << sim.max_plan_nodes << '\n'
        << "seed = " << sim.seed << '\n'
        << "uniformity_bins_x = " << sim.uniformity_bins_x << '\n'
        << "uniformity_bins_y = " << sim.uniformity_bins_y << '\n'
        << "lambdas = " << join(c.axes.lambdas, [](double v) { return format_double(v); }) << '\n'
        << "head_counts = " << join(c.axes.head_counts, [](int v) { return std::to_string(v); }) << '\n'
        << "strategies = " << join(c.axes.strategies, [](Strategy s) { return to_string(s); }) << '\n'
        << "planners = " << join(c.axes.planners, [](PlannerKind p) { return to_string(p); }) << '\n'
        << "seeds = " << join(c.axes.seeds, [](std::uint64_t s) { return std::to_string(s); }) << '\n'
        << "timing = " << (c.timing ? "on" : "off") << '\n';
}

} // namespace weedplan
