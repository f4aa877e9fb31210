#include "tdgl/stepper.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tdgl/cholesky.hpp"

namespace tdgl {

void SolverConfig::validate() const
{
    auto unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!unit(newton_tol)) throw std::invalid_argument("newton_tol must lie in (0, 1)");
    if (!unit(gmres_tol)) throw std::invalid_argument("gmres_tol must lie in (0, 1)");
    if (newton_max_iter < 1) throw std::invalid_argument("newton_max_iter must be >= 1");
    if (gmres_max_iter < 1) throw std::invalid_argument("gmres_max_iter must be >= 1");
    if (gmres_restart < 0) throw std::invalid_argument("gmres_restart must be >= 0");
}

namespace {

std::string newton_message(int step, const std::vector<double>& inc)
{
    std::ostringstream os;
    os << "Newton did not converge at step " << step << "; increments:";
    for (double v : inc) os << ' ' << v;
    return os.str();
}

BlockDiagonalPreconditioner factorize_blocks(const PreconditionerBlocks& b)
{
    std::vector<FactorizedSpd> f;
    f.push_back(factorize_spd(b.psi_r));
    f.push_back(factorize_spd(b.psi_i));
    f.push_back(factorize_spd(b.a));
    return BlockDiagonalPreconditioner(std::move(f));
}

}  // namespace

NewtonFailure::NewtonFailure(int step, std::vector<double> increments)
    : std::runtime_error(newton_message(step, increments)), step_(step), increments_(std::move(increments))
{
}

StepSolver::StepSolver(const Discretization& disc, Params params, SolverConfig config)
    : disc_(&disc), params_(std::move(params)), config_(config),
      blocks_((params_.validate(), config_.validate(), assemble_preconditioner_blocks(disc, params_))),
      precond_(factorize_blocks(blocks_))
{
}

double StepSolver::triple_norm(std::span<const double> w) const
{
    return std::sqrt(std::max(0.0, triple_norm_squared(blocks_, *disc_, w)));
}

NewtonResult StepSolver::solve(const State& prev, const SourceTerms* sources, double t_next, int step) const
{
    const Discretization& disc = *disc_;
    NewtonResult out;
    std::vector<double> x = disc.pack(prev);
    const GmresOptions opts{config_.gmres_tol, config_.gmres_max_iter, config_.gmres_restart};
    const LinearOperator precond = config_.precondition ? precond_.as_operator() : LinearOperator{};

    for (int k = 0; k < config_.newton_max_iter; ++k) {
        const State current = disc.unpack(x);
        const auto rhs = assemble_residual(disc, current, prev, params_, sources, t_next);
        const CsrMatrix jac = assemble_jacobian(disc, current, params_);
        const LinearOperator op = [&jac](std::span<const double> v, std::span<double> y) { jac.multiply(v, y); };
        const GmresResult lin = gmres(op, precond, rhs, opts);
        out.krylov_iters.push_back(lin.iterations);
        out.gmres_converged = out.gmres_converged && lin.converged;

        for (std::size_t i = 0; i < x.size(); ++i) x[i] += lin.x[i];
        const double err = triple_norm(lin.x);
        out.increments.push_back(err);
        if (!std::isfinite(err)) break;
        if (err <= config_.newton_tol) {
            out.state = disc.unpack(x);
            return out;
        }
    }
    throw NewtonFailure(step, out.increments);
}

NewtonResult newton_solve(const Discretization& disc, const State& prev, const Params& params,
                          const SourceTerms* sources, double t_next, const SolverConfig& config)
{
    return StepSolver(disc, params, config).solve(prev, sources, t_next);
}

double RunStats::average_newton() const
{
    if (steps.empty()) return 0.0;
    double s = 0.0;
    for (const auto& r : steps) s += r.newton_iters;
    return s / static_cast<double>(steps.size());
}

double RunStats::average_krylov() const
{
    double s = 0.0;
    std::size_t n = 0;
    for (const auto& r : steps) {
        for (int k : r.krylov_iters) s += k;
        n += r.krylov_iters.size();
    }
    return n == 0 ? 0.0 : s / static_cast<double>(n);
}

int RunStats::krylov_total(std::size_t step) const
{
    const auto& k = steps.at(step).krylov_iters;
    return std::accumulate(k.begin(), k.end(), 0);
}

double RunStats::max_abs_psi() const
{
    double m = initial_max_abs_psi;
    for (const auto& r : steps) m = std::max(m, r.max_abs_psi);
    return m;
}

bool RunStats::all_gmres_converged() const
{
    return std::all_of(steps.begin(), steps.end(), [](const StepRecord& r) { return r.gmres_converged; });
}

SimulationResult run_simulation(const Discretization& disc, const Params& params,
                                const InitialData& initial, const SourceTerms* sources,
                                const RunOptions& options, const SolverConfig& config)
{
    params.validate();
    config.validate();
    if (!(options.t_final > 0.0)) throw std::invalid_argument("final time must be positive");
    const double ratio = options.t_final / params.dt;
    const long n_steps = std::lround(ratio);
    if (n_steps < 1 || std::abs(ratio - static_cast<double>(n_steps)) > 1e-8 * ratio) {
        throw std::invalid_argument("time step does not divide the final time");
    }

    SimulationResult result;
    State state = initial_projection(disc, initial);
    result.stats.initial_energy = gibbs_energy(disc, state, params, 0.0);
    result.stats.initial_max_abs_psi = max_abs_psi(state);

    auto wants_snapshot = [&](double t) {
        return std::any_of(options.snapshot_times.begin(), options.snapshot_times.end(),
                           [&](double s) { return std::abs(s - t) < 0.5 * params.dt; });
    };
    if (wants_snapshot(0.0)) result.snapshots.push_back({0, 0.0, state});

    const StepSolver solver(disc, params, config);
    for (long n = 1; n <= n_steps; ++n) {
        const double t = static_cast<double>(n) * params.dt;
        const auto start = std::chrono::steady_clock::now();
        NewtonResult step = solver.solve(state, sources, t, static_cast<int>(n));
        const auto stop = std::chrono::steady_clock::now();
        state = std::move(step.state);
        try {
            disc.check(state);
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("state became non-finite at step " + std::to_string(n));
        }

        StepRecord rec;
        rec.step = static_cast<int>(n);
        rec.time = t;
        rec.newton_iters = static_cast<int>(step.krylov_iters.size());
        rec.krylov_iters = std::move(step.krylov_iters);
        rec.energy = gibbs_energy(disc, state, params, t);
        rec.max_abs_psi = max_abs_psi(state);
        rec.wall_seconds = std::chrono::duration<double>(stop - start).count();
        rec.gmres_converged = step.gmres_converged;
        if (options.on_step) options.on_step(rec, state);
        result.stats.steps.push_back(std::move(rec));
        if (wants_snapshot(t)) result.snapshots.push_back({static_cast<int>(n), t, state});
    }
    result.final_state = std::move(state);
    return result;
}

EnergyVerdict energy_monitor(const RunStats& stats, double slack)
{
    EnergyVerdict v;
    const double g0 = stats.initial_energy;
    double previous = g0;
    double peak = g0;
    for (const auto& r : stats.steps) {
        const double increase = r.energy - previous;
        v.worst_increase = std::max(v.worst_increase, increase);
        if (increase > slack * g0 && v.decays) {
            v.decays = false;
            v.first_violation = r.step;
        }
        peak = std::max(peak, r.energy);
        previous = r.energy;
    }
    v.bound_ratio = g0 > 0.0 ? peak / g0 : 1.0;
    return v;
}

}  // namespace tdgl
