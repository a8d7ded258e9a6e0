#include "weedplan/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <ostream>
#include <thread>

namespace weedplan {

namespace {

std::string csv_safe(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

template <typename F> double mean_of(const std::vector<RunSummary> &runs, F f) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto &r : runs) {
        if (r.error.empty()) {
            sum += f(r);
            ++n;
        }
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

} // namespace

bool CellResult::ok() const {
    return std::any_of(runs.begin(), runs.end(), [](const RunSummary &r) { return r.error.empty(); });
}

double CellResult::mean_loss_pct() const {
    return mean_of(runs, [](const RunSummary &r) { return r.loss_pct; });
}

double CellResult::std_loss_pct() const {
    const double m = mean_loss_pct();
    const double var = mean_of(runs, [m](const RunSummary &r) { return (r.loss_pct - m) * (r.loss_pct - m); });
    return std::sqrt(var);
}

double CellResult::mean_travel_m() const {
    return mean_of(runs, [](const RunSummary &r) { return r.travel_mean_m; });
}

std::size_t SweepResult::failed_cells() const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const CellResult &c) { return !c.ok(); }));
}

RunSummary summarize(std::uint64_t seed, const SimulationReport &report) {
    RunSummary s;
    s.seed = seed;
    s.total = report.total_weeds;
    s.sprayed = report.sprayed;
    s.missed = report.missed;
    s.loss_pct = report.loss_pct;
    s.travel_mean_m = report.travel_mean_m;
    s.travel_std_m = report.travel_std_m;
    s.planning_wall_s = report.wall_clock_planning_s;
    return s;
}

SweepResult sweep(const SweepAxes &axes, const SweepTemplate &tmpl, unsigned jobs) {
    SweepResult result;
    for (double lambda : axes.lambdas) {
        for (int h : axes.head_counts) {
            for (auto strategy : axes.strategies) {
                for (auto planner : axes.planners) {
                    CellResult cell;
                    cell.key = {lambda, h, strategy, planner};
                    cell.runs.resize(axes.seeds.size());
                    result.cells.push_back(std::move(cell));
                }
            }
        }
    }

    const std::size_t per_cell = axes.seeds.size();
    const std::size_t tasks = result.cells.size() * per_cell;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t task = next++; task < tasks; task = next++) {
            auto &cell = result.cells[task / per_cell];
            const std::size_t s = task % per_cell;
            const auto seed = axes.seeds[s];
            auto &out = cell.runs[s];
            out.seed = seed;
            try {
                FieldParams fp = tmpl.field_params;
                fp.lambda = cell.key.lambda;
                fp.seed = seed;
                SimulationConfig cfg = tmpl.sim;
                cfg.field = generate_field(fp);
                cfg.rig.num_heads = cell.key.heads;
                cfg.rig.lane_width_m = fp.lane_width_m;
                cfg.strategy = cell.key.strategy;
                cfg.planner = cell.key.planner;
                cfg.seed = seed;
                out = summarize(seed, run(cfg));
            } catch (const std::exception &e) {
                out.error = e.what();
            }
        }
    };

    if (jobs == 0) {
        jobs = std::max(1u, std::thread::hardware_concurrency());
    }
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(tasks, 1)));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < jobs; ++i) {
            pool.emplace_back(worker);
        }
    }
    return result;
}

void write_results_csv(std::ostream &out, const SweepResult &result, bool timing) {
    out << kResultsHeader << '\n';
    auto key_cols = [&](const CellKey &k) {
        out << format_double(k.lambda) << ',' << k.heads << ',' << to_string(k.strategy) << ','
            << to_string(k.planner) << ',';
    };
    for (const auto &cell : result.cells) {
        for (const auto &r : cell.runs) {
            key_cols(cell.key);
            out << r.seed << ',';
            if (r.error.empty()) {
                out << r.total << ',' << r.sprayed << ',' << r.missed << ',' << format_double(r.loss_pct) << ','
                    << format_double(r.travel_mean_m) << ',' << format_double(r.travel_std_m) << ','
                    << format_double(timing ? r.planning_wall_s : 0.0) << ",,\n";
            } else {
                out << ",,,,,,,," << csv_safe(r.error) << '\n';
            }
        }
    }
    for (const auto &cell : result.cells) {
        key_cols(cell.key);
        out << "agg,";
        if (!cell.ok()) {
            out << ",,,,,,,,cell failed\n";
            continue;
        }
        const auto &runs = cell.runs;
        out << format_double(mean_of(runs, [](const RunSummary &r) { return static_cast<double>(r.total); })) << ','
            << format_double(mean_of(runs, [](const RunSummary &r) { return static_cast<double>(r.sprayed); })) << ','
            << format_double(mean_of(runs, [](const RunSummary &r) { return static_cast<double>(r.missed); })) << ','
            << format_double(cell.mean_loss_pct()) << ',' << format_double(cell.mean_travel_m()) << ','
            << format_double(mean_of(runs, [](const RunSummary &r) { return r.travel_std_m; })) << ','
            << format_double(timing ? mean_of(runs, [](const RunSummary &r) { return r.planning_wall_s; }) : 0.0)
            << ',' << format_double(cell.std_loss_pct()) << ',';
        const auto failures = std::count_if(runs.begin(), runs.end(), [](const RunSummary &r) { return !r.error.empty(); });
        if (failures > 0) {
            out << failures << " of " << runs.size() << " seeds failed";
        }
        out << '\n';
    }
}

} // namespace weedplan
