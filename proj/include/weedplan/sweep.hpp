#pragma once

#include "weedplan/simulator.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace weedplan {

struct SweepAxes {
    std::vector<double> lambdas;
    std::vector<int> head_counts;
    std::vector<Strategy> strategies;
    std::vector<PlannerKind> planners;
    std::vector<std::uint64_t> seeds;
};

struct CellKey {
    double lambda = 0.0;
    int heads = 0;
    Strategy strategy = Strategy::D;
    PlannerKind planner = PlannerKind::notsp;
};

struct RunSummary {
    std::uint64_t seed = 0;
    std::size_t total = 0;
    std::size_t sprayed = 0;
    std::size_t missed = 0;
    double loss_pct = 0.0;
    double travel_mean_m = 0.0;
    double travel_std_m = 0.0;
    double planning_wall_s = 0.0;
    std::string error; // empty on success
};

struct CellResult {
    CellKey key;
    std::vector<RunSummary> runs; // one per seed, in axis order

    bool ok() const;
    double mean_loss_pct() const;
    double std_loss_pct() const; // population std over successful seeds
    double mean_travel_m() const;
};

struct SweepResult {
    std::vector<CellResult> cells; // lambda-major, then heads, strategy, planner
    std::size_t failed_cells() const;
};

/// Template for every cell: the field is regenerated per (lambda, seed) from
/// field_params, and sim supplies everything else. The cell overrides
/// rig.num_heads, strategy, planner and seed.
struct SweepTemplate {
    FieldParams field_params;
    SimulationConfig sim;
};

RunSummary summarize(std::uint64_t seed, const SimulationReport &report);

/// Runs the cartesian product of the axes. Per-run errors are recorded in
/// the affected RunSummary and never abort the sweep. jobs == 0 means one
/// worker per hardware thread.
SweepResult sweep(const SweepAxes &axes, const SweepTemplate &tmpl, unsigned jobs = 0);

/// Results CSV: header, one row per (cell, seed), then one `seed=agg` row
/// per cell. With timing off, planning_wall_s is written as 0 so the bytes
/// are reproducible.
void write_results_csv(std::ostream &out, const SweepResult &result, bool timing);

inline constexpr const char *kResultsHeader =
    "lambda,H,strategy,planner,seed,total,sprayed,missed,loss_pct,travel_mean_m,travel_std_m,planning_wall_s,"
    "loss_std_pct,error";

} // namespace weedplan
