#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdgl/assembly.hpp"
#include "tdgl/gmres.hpp"

namespace tdgl {

struct SolverConfig {
    /// Tolerance on |||w||| for the Newton increment w.
    double newton_tol = 1e-8;
    int newton_max_iter = 20;
    double gmres_tol = 1e-8;
    int gmres_max_iter = 500;
    int gmres_restart = 0;
    bool precondition = true;

    void validate() const;
};

/// Raised when Newton does not reach newton_tol within newton_max_iter.
class NewtonFailure : public std::runtime_error {
public:
    NewtonFailure(int step, std::vector<double> increments);
    int step() const { return step_; }
    const std::vector<double>& increments() const { return increments_; }

private:
    int step_;
    std::vector<double> increments_;
};

struct NewtonResult {
    State state;
    /// GMRES iterations of each Newton iteration.
    std::vector<int> krylov_iters;
    /// |||w||| of each Newton increment.
    std::vector<double> increments;
    bool gmres_converged = true;
};

/// Newton solver for one backward-Euler step. The preconditioner blocks
/// depend only on the parameters and are factorized once here.
class StepSolver {
public:
    StepSolver(const Discretization& disc, Params params, SolverConfig config);

    const Params& params() const { return params_; }
    const SolverConfig& config() const { return config_; }
    const PreconditionerBlocks& blocks() const { return blocks_; }

    /// Solves for the state at t_next starting from prev. `step` only labels
    /// failures.
    NewtonResult solve(const State& prev, const SourceTerms* sources, double t_next, int step = 0) const;

    double triple_norm(std::span<const double> w) const;

private:
    const Discretization* disc_;
    Params params_;
    SolverConfig config_;
    PreconditionerBlocks blocks_;
    BlockDiagonalPreconditioner precond_;
};

NewtonResult newton_solve(const Discretization& disc, const State& prev, const Params& params,
                          const SourceTerms* sources, double t_next, const SolverConfig& config);

struct StepRecord {
    int step = 0;
    double time = 0.0;
    int newton_iters = 0;
    std::vector<int> krylov_iters;
    double energy = 0.0;
    double max_abs_psi = 0.0;
    double wall_seconds = 0.0;
    bool gmres_converged = true;
};

struct RunStats {
    /// Values for the projected initial state.
    double initial_energy = 0.0;
    double initial_max_abs_psi = 0.0;
    std::vector<StepRecord> steps;

    /// Mean Newton iterations per time step.
    double average_newton() const;
    /// Mean GMRES iterations per Newton iteration.
    double average_krylov() const;
    int krylov_total(std::size_t step) const;
    double max_abs_psi() const;
    bool all_gmres_converged() const;
};

struct Snapshot {
    int step = 0;
    double time = 0.0;
    State state;
};

struct RunOptions {
    double t_final = 1.0;
    std::vector<double> snapshot_times;
    /// Called after every step; may be empty.
    std::function<void(const StepRecord&, const State&)> on_step;
};

struct SimulationResult {
    State final_state;
    RunStats stats;
    std::vector<Snapshot> snapshots;
};

/// Projects the initial data, then takes round(T/Δt) Newton-solved steps.
/// Throws NewtonFailure, or std::runtime_error when the state turns
/// non-finite.
SimulationResult run_simulation(const Discretization& disc, const Params& params,
                                const InitialData& initial, const SourceTerms* sources,
                                const RunOptions& options, const SolverConfig& config);

struct EnergyVerdict {
    bool decays = true;
    /// First step n with G(n) > G(n-1) + slack·G(0), or -1.
    int first_violation = -1;
    double worst_increase = 0.0;
    /// max_n G(n) / G(0).
    double bound_ratio = 1.0;
};

EnergyVerdict energy_monitor(const RunStats& stats, double slack = 1e-6);

}  // namespace tdgl
