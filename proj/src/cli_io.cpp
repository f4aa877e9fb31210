#include "tdgl/cli_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace tdgl {

namespace {

std::ofstream open_output(const std::filesystem::path& path)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << std::setprecision(10) << std::scientific;
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

void write_vtk_snapshot(const Discretization& disc, const State& state, const Params& params,
                        const std::filesystem::path& path)
{
    disc.check(state);
    const Mesh& mesh = disc.mesh();
    const auto curl = curl_field(disc, state);
    const auto js = supercurrent_average(disc, state, params);
    auto out = open_output(path);
    const std::size_t nv = mesh.num_vertices();
    const std::size_t nt = mesh.num_triangles();
    out << "# vtk DataFile Version 3.0\n"
        << "tdgl snapshot\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << nv << " double\n";
    for (const Vec2& v : mesh.vertices()) out << v.x << ' ' << v.y << " 0\n";
    out << "CELLS " << nt << ' ' << 4 * nt << '\n';
    for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "CELL_TYPES " << nt << '\n';
    for (std::size_t t = 0; t < nt; ++t) out << "5\n";
    out << "CELL_DATA " << nt << "\nSCALARS curl_A double 1\nLOOKUP_TABLE default\n";
    for (double c : curl) out << c << '\n';
    out << "VECTORS supercurrent double\n";
    for (const Vec2& j : js) out << j.x << ' ' << j.y << " 0\n";
    out << "POINT_DATA " << nv << "\nSCALARS psi_sq double 1\nLOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < nv; ++i) out << state.psi_r[i] * state.psi_r[i] + state.psi_i[i] * state.psi_i[i] << '\n';
    finish(out, path);
}

void write_stats_csv(const RunStats& stats, const std::filesystem::path& path)
{
    auto out = open_output(path);
    out << "step,time,newton_iters,krylov_iters_total,energy,max_abs_psi\n";
    out << 0 << ',' << 0.0 << ',' << 0 << ',' << 0 << ',' << stats.initial_energy << ','
        << stats.initial_max_abs_psi << '\n';
    for (std::size_t i = 0; i < stats.steps.size(); ++i) {
        const auto& r = stats.steps[i];
        out << r.step << ',' << r.time << ',' << r.newton_iters << ',' << stats.krylov_total(i) << ','
            << r.energy << ',' << r.max_abs_psi << '\n';
    }
    finish(out, path);
}

void write_errors_csv(const std::vector<ErrorRow>& rows, const std::filesystem::path& path)
{
    auto out = open_output(path);
    out << "M,eA,rateA,er,rater,ei,ratei,ed,rated\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& e = rows[i].errors;
        const double cur[4] = {e.e_a, e.e_r, e.e_i, e.e_d};
        out << rows[i].m;
        for (int k = 0; k < 4; ++k) {
            out << ',' << cur[k] << ',';
            if (i > 0) {
                const auto& p = rows[i - 1].errors;
                const double prev[4] = {p.e_a, p.e_r, p.e_i, p.e_d};
                out << std::log(prev[k] / cur[k]) / std::log(static_cast<double>(rows[i].m) / rows[i - 1].m);
            }
        }
        out << '\n';
    }
    finish(out, path);
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& key)
{
    std::size_t used = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(key + ": not a number: '" + v + "'");
    return d;
}

int to_int(const std::string& v, const std::string& key)
{
    std::size_t used = 0;
    int i = 0;
    try {
        i = std::stoi(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size()) throw std::invalid_argument(key + ": not an integer: '" + v + "'");
    return i;
}

bool to_bool(const std::string& v, const std::string& key)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument(key + ": not a boolean: '" + v + "'");
}

template <class T, class F>
std::vector<T> to_list(const std::string& v, const std::string& key, F convert)
{
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(convert(trim(item), key));
    return out;
}

void apply_key(RunConfig& c, const std::string& key, const std::string& v)
{
    if (key == "scenario.name") c.scenario = v;
    else if (key == "scenario.geometry") c.geometry = v;
    else if (key == "scenario.M") c.m = to_int(v, key);
    else if (key == "scenario.h_target") c.h_target = to_double(v, key);
    else if (key == "scenario.kappa") c.kappa = to_double(v, key);
    else if (key == "scenario.sigma") c.sigma = to_double(v, key);
    else if (key == "scenario.H") c.applied_field = to_double(v, key);
    else if (key == "scenario.psi0_re") c.psi0_re = to_double(v, key);
    else if (key == "scenario.psi0_im") c.psi0_im = to_double(v, key);
    else if (key == "scenario.a0_x") c.a0_x = to_double(v, key);
    else if (key == "scenario.a0_y") c.a0_y = to_double(v, key);
    else if (key == "scenario.dt") c.dt = to_double(v, key);
    else if (key == "scenario.T") c.t_final = to_double(v, key);
    else if (key == "solver.newton_tol") c.solver.newton_tol = to_double(v, key);
    else if (key == "solver.newton_max_iter") c.solver.newton_max_iter = to_int(v, key);
    else if (key == "solver.gmres_tol") c.solver.gmres_tol = to_double(v, key);
    else if (key == "solver.gmres_max_iter") c.solver.gmres_max_iter = to_int(v, key);
    else if (key == "solver.gmres_restart") c.solver.gmres_restart = to_int(v, key);
    else if (key == "solver.precondition") c.solver.precondition = to_bool(v, key);
    else if (key == "output.dir") c.out_dir = v;
    else if (key == "output.snapshots") c.snapshot_times = to_list<double>(v, key, to_double);
    else if (key == "output.vtk") c.write_vtk = to_bool(v, key);
    else if (key == "output.sweep") c.sweep = to_list<int>(v, key, to_int);
    else throw std::invalid_argument("unknown key '" + key + "'");
}

}  // namespace

RunConfig parse_config(std::istream& in)
{
    RunConfig c;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("line " + std::to_string(number) + ": expected key = value");
        }
        try {
            apply_key(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("line " + std::to_string(number) + ": " + e.what());
        }
    }
    return c;
}

RunConfig parse_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file " + path.string());
    return parse_config(in);
}

Scenario resolve_scenario(const RunConfig& c)
{
    Scenario s;
    if (c.scenario == "custom") {
        s.name = "custom";
        if (c.geometry == "unit_square") s.geometry = Geometry::UnitSquare;
        else if (c.geometry == "lshape") s.geometry = Geometry::LShape;
        else if (c.geometry == "holes") s.geometry = Geometry::SquareWithHoles;
        else throw std::invalid_argument("unknown geometry '" + c.geometry + "'");
        s.params.kappa = 1.0;
        s.params.sigma = 1.0;
        s.params.h_ext = [](Vec2, double) { return 0.0; };
        const std::complex<double> psi0(c.psi0_re.value_or(1.0), c.psi0_im.value_or(0.0));
        const Vec2 a0{c.a0_x.value_or(0.0), c.a0_y.value_or(0.0)};
        s.initial.psi0 = [psi0](Vec2) { return psi0; };
        s.initial.a0 = [a0](Vec2) { return a0; };
        s.initial.curl_a0 = [](Vec2) { return 0.0; };
        s.initial.grad_psi0 = [](Vec2) { return std::array<std::complex<double>, 2>{}; };
        s.snapshot_times = {};
        s.set_resolution(16);
    } else if (c.scenario.empty()) {
        throw std::invalid_argument("no scenario given");
    } else {
        s = make_scenario(c.scenario);
        if (c.psi0_re || c.psi0_im || c.a0_x || c.a0_y) {
            throw std::invalid_argument("initial data can only be set for custom scenarios");
        }
    }
    if (c.kappa) s.params.kappa = *c.kappa;
    if (c.sigma) s.params.sigma = *c.sigma;
    if (c.applied_field) {
        if (s.has_exact_solution) throw std::invalid_argument("ex1 fixes the applied field");
        const double h = *c.applied_field;
        s.params.h_ext = [h](Vec2, double) { return h; };
    }
    if (c.m) {
        if (s.geometry == Geometry::SquareWithHoles) throw std::invalid_argument("use h_target for the holes geometry");
        if (s.geometry == Geometry::LShape && *c.m % 2 != 0) throw std::invalid_argument("L-shape needs even M");
        s.set_resolution(*c.m);
    }
    if (c.h_target) {
        if (!(*c.h_target > 0.0 && *c.h_target <= 1.0)) throw std::invalid_argument("h_target must lie in (0, 1]");
        s.h_target = *c.h_target;
    }
    if (c.dt) {
        s.params.dt = *c.dt;
        s.dt_tied_to_m = false;
    }
    if (c.t_final) s.t_final = *c.t_final;
    if (c.snapshot_times) s.snapshot_times = *c.snapshot_times;
    if (s.has_exact_solution && (s.params.kappa != 1.0 || s.params.sigma != 1.0)) {
        s.sources = ex1_solver_sources(s.params.kappa, s.params.sigma);
    }

    s.params.validate();
    c.solver.validate();
    if (!(s.t_final > 0.0)) throw std::invalid_argument("T must be positive");
    const double steps = s.t_final / s.params.dt;
    if (std::abs(steps - std::round(steps)) > 1e-8 * steps) {
        throw std::invalid_argument("dt does not divide T");
    }
    if (!c.sweep.empty() && !s.has_exact_solution) throw std::invalid_argument("sweep needs ex1");
    for (int m : c.sweep) {
        if (m < 1) throw std::invalid_argument("sweep values must be >= 1");
    }
    return s;
}

namespace {

std::string snapshot_name(double t)
{
    std::ostringstream os;
    os << "snapshot_t" << std::fixed << std::setprecision(2) << t << ".vtk";
    return os.str();
}

}  // namespace

RunSummary execute_run(const RunConfig& config, std::ostream& log)
{
    const Scenario base = resolve_scenario(config);
    RunSummary summary;
    std::vector<int> resolutions = config.sweep;
    if (resolutions.empty()) resolutions.push_back(base.m);

    for (int m : resolutions) {
        Scenario s = base;
        if (!config.sweep.empty()) s.set_resolution(m);
        const Discretization disc(s.build_mesh());
        log << s.name << ": " << disc.mesh().num_triangles() << " triangles, " << disc.num_total()
            << " unknowns, dt = " << s.params.dt << ", T = " << s.t_final << '\n';

        RunOptions options;
        options.t_final = s.t_final;
        options.snapshot_times = s.snapshot_times;
        const long n_steps = std::lround(s.t_final / s.params.dt);
        const long every = std::max(1L, n_steps / 10);
        options.on_step = [&](const StepRecord& r, const State&) {
            if (r.step % every == 0) {
                log << "  step " << r.step << " t = " << r.time << " newton " << r.newton_iters << " energy "
                    << r.energy << '\n';
            }
        };
        const SourceTerms* sources = s.sources ? &*s.sources : nullptr;
        const auto result = run_simulation(disc, s.params, s.initial, sources, options, config.solver);

        const auto dir = config.sweep.empty() ? config.out_dir : config.out_dir / ("M" + std::to_string(m));
        const auto stats_path = dir / "stats.csv";
        write_stats_csv(result.stats, stats_path);
        summary.files.push_back(stats_path);
        if (config.write_vtk) {
            for (const auto& snap : result.snapshots) {
                const auto p = dir / snapshot_name(snap.time);
                write_vtk_snapshot(disc, snap.state, s.params, p);
                summary.files.push_back(p);
            }
        }
        if (s.has_exact_solution) {
            summary.errors.push_back({m, error_norms(disc, result.final_state, s.t_final)});
        }
        log << "  average Newton " << result.stats.average_newton() << ", average GMRES "
            << result.stats.average_krylov() << '\n';
        summary.stats = result.stats;
    }
    if (!summary.errors.empty()) {
        const auto p = config.out_dir / "errors.csv";
        write_errors_csv(summary.errors, p);
        summary.files.push_back(p);
    }
    return summary;
}

}  // namespace tdgl
