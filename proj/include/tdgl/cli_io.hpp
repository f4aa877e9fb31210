#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tdgl/scenarios.hpp"
#include "tdgl/stepper.hpp"

namespace tdgl {

/// Legacy ASCII VTK (UNSTRUCTURED_GRID, triangles): point scalar psi_sq,
/// cell scalar curl_A and cell vector supercurrent.
void write_vtk_snapshot(const Discretization& disc, const State& state, const Params& params,
                        const std::filesystem::path& path);

/// step,time,newton_iters,krylov_iters_total,energy,max_abs_psi. Row 0 is
/// the projected initial state.
void write_stats_csv(const RunStats& stats, const std::filesystem::path& path);

struct ErrorRow {
    int m = 0;
    ErrorNorms errors;
};

/// M,eA,rateA,er,rater,ei,ratei,ed,rated. Rates are
/// log(e_prev/e)/log(M/M_prev) and empty on the first row.
void write_errors_csv(const std::vector<ErrorRow>& rows, const std::filesystem::path& path);

struct RunConfig {
    std::string scenario;
    /// Custom runs only.
    std::string geometry = "unit_square";
    std::optional<int> m;
    std::optional<double> h_target;
    std::optional<double> kappa;
    std::optional<double> sigma;
    std::optional<double> applied_field;
    std::optional<double> psi0_re;
    std::optional<double> psi0_im;
    std::optional<double> a0_x;
    std::optional<double> a0_y;
    std::optional<double> dt;
    std::optional<double> t_final;

    SolverConfig solver;
    std::filesystem::path out_dir = "out";
    std::optional<std::vector<double>> snapshot_times;
    bool write_vtk = true;
    /// ex1 only: run every listed M and tabulate rates.
    std::vector<int> sweep;
};

/// Flat `key = value` lines with scenario., solver. and output. prefixes;
/// `#` starts a comment. Throws std::invalid_argument with the line number.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::filesystem::path& path);

/// Builds the scenario selected by the config and applies its overrides.
/// Validates every parameter; throws std::invalid_argument.
Scenario resolve_scenario(const RunConfig& config);

struct RunSummary {
    std::vector<ErrorRow> errors;
    RunStats stats;
    std::vector<std::filesystem::path> files;
};

/// Runs the configured simulation (or ex1 sweep) and writes stats.csv,
/// errors.csv (ex1) and VTK snapshots under config.out_dir. Progress goes to `log`.
RunSummary execute_run(const RunConfig& config, std::ostream& log);

}  // namespace tdgl
