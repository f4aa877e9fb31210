#include <iostream>

#include "CLI11.hpp"
#include "tdgl/cli_io.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Ginzburg-Landau vortex simulator (temporal gauge, Nedelec/P1, Newton-GMRES)"};
    std::string scenario;
    std::string config_file;
    std::optional<int> m;
    std::optional<double> dt, t_final, newton_tol, gmres_tol, h_target;
    std::string out_dir;
    bool no_precond = false;
    bool no_vtk = false;
    std::vector<int> sweep;

    auto* scen = app.add_option("--scenario", scenario, "ex1 | ex2 | ex3 | ex4-h08 | ex4-h11 | custom")
                     ->check(CLI::IsMember({"ex1", "ex2", "ex3", "ex4-h08", "ex4-h11", "custom"}));
    auto* cfg = app.add_option("--config", config_file, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--M", m, "cells per unit length (sets dt = 1/M for ex1-ex3)");
    app.add_option("--h-target", h_target, "target mesh size for the holes geometry");
    app.add_option("--dt", dt, "time step");
    app.add_option("--T", t_final, "final time");
    app.add_flag("--no-precond", no_precond, "run GMRES without the block preconditioner");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--newton-tol", newton_tol, "Newton tolerance on the increment norm");
    app.add_option("--gmres-tol", gmres_tol, "GMRES relative tolerance");
    app.add_option("--sweep", sweep, "ex1: list of M values for a convergence table")->delimiter(',');
    app.add_flag("--no-vtk", no_vtk, "skip VTK snapshots");
    scen->excludes(cfg);
    CLI11_PARSE(app, argc, argv);

    try {
        tdgl::RunConfig config;
        if (!config_file.empty()) config = tdgl::parse_config_file(config_file);
        if (!scenario.empty()) config.scenario = scenario;
        if (config.scenario.empty()) throw std::invalid_argument("give --scenario or --config");
        if (m) config.m = *m;
        if (h_target) config.h_target = *h_target;
        if (dt) config.dt = *dt;
        if (t_final) config.t_final = *t_final;
        if (newton_tol) config.solver.newton_tol = *newton_tol;
        if (gmres_tol) config.solver.gmres_tol = *gmres_tol;
        if (no_precond) {
            config.solver.precondition = false;
            config.solver.gmres_max_iter = std::max(config.solver.gmres_max_iter, 5000);
        }
        if (no_vtk) config.write_vtk = false;
        if (!sweep.empty()) config.sweep = sweep;
        if (!out_dir.empty()) config.out_dir = out_dir;

        const auto summary = tdgl::execute_run(config, std::cout);
        for (const auto& f : summary.files) std::cout << "wrote " << f.string() << '\n';
        if (!summary.stats.all_gmres_converged()) {
            std::cerr << "warning: some GMRES solves stopped at the iteration limit\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
