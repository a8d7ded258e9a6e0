#include "cli.hpp"

#include "weedplan/bench.hpp"
#include "weedplan/config.hpp"
#include "weedplan/errors.hpp"
#include "weedplan/field_model.hpp"
#include "weedplan/planner.hpp"
#include "weedplan/simulator.hpp"
#include "weedplan/sweep.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

namespace weedplan::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::shared_ptr<spdlog::logger> make_logger(std::ostream &err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto log = std::make_shared<spdlog::logger>("weedplan", sink);
    log->set_pattern("[%l] %v");
    auto level = spdlog::level::err;
    if (const char *env = std::getenv("WEEDPLAN_LOG")) {
        const std::string v = env;
        if (v == "info") {
            level = spdlog::level::info;
        } else if (v == "debug") {
            level = spdlog::level::debug;
        }
    }
    log->set_level(level);
    return log;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ss;
    ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return ss.str();
}

struct Overrides {
    std::string config;
    std::optional<double> lambda;
    std::optional<int> heads;
    std::optional<std::string> strategy;
    std::optional<std::string> planner;
    std::optional<std::uint64_t> seed;
    std::optional<double> gamma;
    std::optional<double> theta;
};

void add_overrides(CLI::App *cmd, Overrides &o) {
    cmd->add_option("--config", o.config, "flat key=value configuration file")->check(CLI::ExistingFile);
    cmd->add_option("-H,--heads", o.heads, "number of intervention heads");
    cmd->add_option("--strategy", o.strategy, "target assignment: D, SD or DD");
    cmd->add_option("--planner", o.planner, "brute_force or notsp");
    cmd->add_option("--gamma", o.gamma, "robot forward speed [m/s]");
    cmd->add_option("--theta", o.theta, "max lateral head speed [m/s]");
    cmd->add_option("--seed", o.seed, "RNG seed");
}

// Config errors here are usage errors (exit 2); they surface before any work.
ExperimentConfig resolve(const Overrides &o) {
    ExperimentConfig c = o.config.empty() ? default_experiment() : load_experiment(o.config);
    if (o.lambda) {
        c.field_params.lambda = *o.lambda;
    }
    if (o.heads) {
        c.sim.rig.num_heads = *o.heads;
    }
    if (o.strategy) {
        c.sim.strategy = parse_strategy(*o.strategy);
    }
    if (o.planner) {
        c.sim.planner = parse_planner(*o.planner);
    }
    if (o.seed) {
        c.sim.seed = c.field_params.seed = *o.seed;
    }
    if (o.gamma) {
        c.sim.robot_speed = *o.gamma;
    }
    if (o.theta) {
        c.sim.rig.head_max_velocity = *o.theta;
    }
    return c;
}

int cmd_generate(const FieldParams &params, const std::string &out_path, spdlog::logger &log) {
    const auto field = generate_field(params);
    save_field(out_path, field);
    log.info("wrote {} plants ({} weeds) to {}", field.plants.size(), field.weed_count(), out_path);
    return kExitOk;
}

int cmd_plan(const ExperimentConfig &c, const std::string &field_path, std::size_t segment_index, std::ostream &out,
             spdlog::logger &log) {
    const auto field = load_field(field_path);
    const auto &rig = c.sim.rig;
    ToolRig checked = rig;
    checked.lane_width_m = field.lane_width_m;
    checked.validate();

    const double seg_len = c.sim.segment_length_m;
    const double lo = static_cast<double>(segment_index) * seg_len;
    const double hi = lo + seg_len;
    std::vector<PlantInstance> seg;
    for (const auto &w : field.weeds()) {
        if (w.x >= lo && w.x < hi) {
            seg.push_back(w);
        }
    }
    const Kinematics kin{c.sim.robot_speed, rig.head_max_velocity};
    const TargetGraph graph(seg, kin, c.sim.cost_metric);

    std::vector<HeadState> heads;
    for (int h = 0; h < checked.num_heads; ++h) {
        heads.push_back({h, checked.rest_position(h), 0.0});
    }
    const auto assignment = assign(c.sim.strategy, graph, heads, field.lane_width_m);

    // Same timing as the simulator: planned when the segment is fully in view,
    // active after the latency budget.
    const double toolline = lo - checked.camera_tool_gap_m + c.sim.robot_speed * c.sim.latency_budget_s;
    int visited = 0;
    std::ostringstream dump;
    for (std::size_t h = 0; h < assignment.per_head.size(); ++h) {
        std::vector<TargetNode> nodes;
        for (int id : assignment.per_head[h]) {
            nodes.push_back(graph.node(id));
        }
        auto traj = plan(c.sim.planner, nodes, {heads[h].y_position, toolline}, kin);
        traj.head_index = static_cast<int>(h);
        visited += traj.visited_count;
        write_plan_line(dump, traj, graph);
    }
    out << dump.str() << "visited=" << visited << '/' << graph.size() << '\n';
    log.info("segment {} planned: {} of {} targets reachable", segment_index, visited, graph.size());
    return kExitOk;
}

int cmd_run(ExperimentConfig c, const std::string &field_path, const std::string &events_path, bool timing,
            std::ostream &out, spdlog::logger &log) {
    SimulationReport report;
    if (!field_path.empty()) {
        c.sim.rig.lane_width_m = load_field(field_path).lane_width_m;
        report = replay_real(field_path, c.sim);
    } else {
        c.sim.field = generate_field(c.field_params);
        report = run(c.sim);
    }
    if (!events_path.empty()) {
        std::ofstream ev(events_path, std::ios::binary);
        if (!ev) {
            throw std::runtime_error("cannot write event log " + events_path);
        }
        write_event_log(ev, report.event_log);
    }
    out << report_json(report, timing) << '\n';
    log.info("{} of {} weeds sprayed", report.sprayed, report.total_weeds);
    return kExitOk;
}

int cmd_sweep(const ExperimentConfig &c, const std::string &config_path, const std::string &out_dir, unsigned jobs,
              std::ostream &out, spdlog::logger &log) {
    fs::create_directories(out_dir);
    SweepTemplate tmpl{c.field_params, c.sim};
    const auto result = sweep(c.axes, tmpl, jobs);

    const auto csv_path = fs::path(out_dir) / "results.csv";
    {
        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv) {
            throw std::runtime_error("cannot write " + csv_path.string());
        }
        write_results_csv(csv, result, c.timing);
    }
    const auto manifest_path = fs::path(out_dir) / "manifest.txt";
    {
        std::ofstream m(manifest_path, std::ios::binary);
        m << "# weedplan " << kVersion << '\n'
          << "# timestamp: " << timestamp_utc() << '\n'
          << "# config: " << config_path << '\n'
          << "# output: " << out_dir << '\n';
        write_experiment(m, c);
    }

    const auto failed = result.failed_cells();
    for (const auto &cell : result.cells) {
        for (const auto &r : cell.runs) {
            if (!r.error.empty()) {
                log.error("lambda={} H={} {} {} seed={}: {}", cell.key.lambda, cell.key.heads,
                          to_string(cell.key.strategy), to_string(cell.key.planner), r.seed, r.error);
            }
        }
    }
    out << "cells=" << result.cells.size() << " failed=" << failed << " results=" << csv_path.string() << '\n';
    return failed == result.cells.size() && !result.cells.empty() ? kExitRuntime : kExitOk;
}

int cmd_bench(std::size_t n, std::size_t trials, std::uint64_t seed, std::ostream &out) {
    const auto r = run_planner_bench(n, trials, seed);
    out << "planner,n,trials,median_s\n"
        << "brute_force," << r.n << ',' << r.trials << ',' << format_double(r.median_brute_force_s) << '\n'
        << "notsp," << r.n << ',' << r.trials << ',' << format_double(r.median_notsp_s) << '\n'
        << "ratio=" << format_double(r.ratio) << " agree=" << (r.plans_agree ? 1 : 0) << '\n';
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    auto log = make_logger(err);

    CLI::App app{"Weed-field simulation and intervention-head route planning", "weedplan"};
    app.set_version_flag("--version", std::string("weedplan ") + kVersion);
    app.require_subcommand(1);

    FieldParams gen;
    std::string gen_out;
    auto *generate = app.add_subcommand("generate", "generate a Poisson weed field as Field CSV");
    generate->add_option("--lambda", gen.lambda, "weeds per square meter")->required();
    generate->add_option("--length", gen.length_m, "lane length [m]")->required();
    generate->add_option("--lane-width", gen.lane_width_m, "lane width [m]")->required();
    generate->add_option("--rows", gen.num_crop_rows, "crop rows")->required();
    generate->add_option("--crop-spacing", gen.crop_spacing_m, "crop spacing along a row [m]");
    generate->add_option("--seed", gen.seed, "RNG seed");
    generate->add_option("-o,--out", gen_out, "output file")->required();

    Overrides plan_o;
    std::string plan_field;
    std::size_t plan_segment = 0;
    auto *plan_cmd = app.add_subcommand("plan", "assign and plan one segment, print the per-head plans");
    plan_cmd->add_option("--field", plan_field, "Field CSV")->required()->check(CLI::ExistingFile);
    plan_cmd->add_option("--segment-index", plan_segment, "segment number along the lane");
    add_overrides(plan_cmd, plan_o);

    Overrides run_o;
    std::string run_field;
    std::string run_events;
    bool run_timing = false;
    auto *run_cmd = app.add_subcommand("run", "simulate one pass over a generated field");
    add_overrides(run_cmd, run_o);
    run_cmd->add_option("--lambda", run_o.lambda, "weeds per square meter");
    run_cmd->add_option("--events", run_events, "write the JSON-lines event log here");
    run_cmd->add_flag("--timing", run_timing, "include planning wall time in the report");

    Overrides replay_o;
    std::string replay_events;
    bool replay_timing = false;
    auto *replay_cmd = app.add_subcommand("replay", "simulate one pass over a Field CSV");
    replay_cmd->add_option("--field", run_field, "Field CSV")->required()->check(CLI::ExistingFile);
    add_overrides(replay_cmd, replay_o);
    replay_cmd->add_option("--events", replay_events, "write the JSON-lines event log here");
    replay_cmd->add_flag("--timing", replay_timing, "include planning wall time in the report");

    std::string sweep_config;
    std::string sweep_out;
    unsigned sweep_jobs = 0;
    auto *sweep_cmd = app.add_subcommand("sweep", "run the density x head-count x strategy grid");
    sweep_cmd->add_option("--config", sweep_config, "flat key=value configuration file")->required()->check(
        CLI::ExistingFile);
    sweep_cmd->add_option("-o,--out", sweep_out, "output directory")->required();
    sweep_cmd->add_option("--jobs", sweep_jobs, "worker threads (default: logical processors)");

    std::size_t bench_n = 10;
    std::size_t bench_trials = 5;
    std::uint64_t bench_seed = 0;
    auto *bench_cmd = app.add_subcommand("bench", "time brute-force against notsp planning");
    bench_cmd->add_option("-n,--n", bench_n, "targets per instance")->required();
    bench_cmd->add_option("--trials", bench_trials, "random instances")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", bench_seed, "RNG seed");

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("weedplan");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char *> argv;
    for (auto &a : argv_store) {
        argv.push_back(a.data());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    ExperimentConfig resolved;
    try {
        if (*plan_cmd) {
            resolved = resolve(plan_o);
        } else if (*run_cmd) {
            resolved = resolve(run_o);
        } else if (*replay_cmd) {
            resolved = resolve(replay_o);
        } else if (*sweep_cmd) {
            resolved = load_experiment(sweep_config);
        }
    } catch (const ParseError &e) {
        err << "weedplan: config: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError &e) {
        err << "weedplan: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*generate) {
            return cmd_generate(gen, gen_out, *log);
        }
        if (*plan_cmd) {
            return cmd_plan(resolved, plan_field, plan_segment, out, *log);
        }
        if (*run_cmd) {
            return cmd_run(resolved, "", run_events, run_timing, out, *log);
        }
        if (*replay_cmd) {
            return cmd_run(resolved, run_field, replay_events, replay_timing, out, *log);
        }
        if (*sweep_cmd) {
            return cmd_sweep(resolved, sweep_config, sweep_out, sweep_jobs, out, *log);
        }
        if (*bench_cmd) {
            return cmd_bench(bench_n, bench_trials, bench_seed, out);
        }
    } catch (const ParameterError &e) {
        err << "weedplan: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "weedplan: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}

} // namespace weedplan::cli
