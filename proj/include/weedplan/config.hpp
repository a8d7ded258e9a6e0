#pragma once

#include "weedplan/sweep.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace weedplan {

/// Everything a CLI run or sweep needs, resolved from a flat `key = value`
/// file. Keys mirror the SimulationConfig / ToolRig / FieldParams fields.
struct ExperimentConfig {
    FieldParams field_params;
    SimulationConfig sim;
    std::optional<std::filesystem::path> field_path; // replay input
    SweepAxes axes;
    bool timing = true;
};

/// Default configuration reproducing the simulated-row protocol:
/// lambda in {3,5,10,20,40}, H in {1,2,4,8}, strategies D/SD/DD, notsp,
/// seeds 1..20.
ExperimentConfig default_experiment();

/// Parses `key = value` lines ('#' starts a comment). Throws ParseError with
/// the offending line number for malformed lines, unknown keys and bad values.
ExperimentConfig parse_experiment(std::istream &in, ExperimentConfig base = default_experiment());
ExperimentConfig load_experiment(const std::filesystem::path &path, ExperimentConfig base = default_experiment());

/// Sets one key; throws ConfigError on unknown keys or bad values.
void apply_setting(ExperimentConfig &config, const std::string &key, const std::string &value);

/// Flat dump of the resolved configuration, loadable by parse_experiment.
void write_experiment(std::ostream &out, const ExperimentConfig &config);

} // namespace weedplan
