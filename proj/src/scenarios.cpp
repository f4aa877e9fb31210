#include "tdgl/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tdgl {

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

/// ψ, ∇ψ, Δψ, A, ∂ₜA, div A, ∇×∇×A of the manufactured solution.
struct Ex1Fields {
    cd psi, psi_x, psi_y, lap_psi;
    Vec2 a, curl_curl_a;
    double div_a;
};

Ex1Fields ex1_fields(Vec2 p, double t)
{
    const double et = std::exp(-t);
    const double ey = std::exp(t - p.y);
    const double ex = std::exp(t - p.x);
    const double c2x = std::cos(2 * kPi * p.x), s2x = std::sin(2 * kPi * p.x);
    const double cy = std::cos(kPi * p.y), sy = std::sin(kPi * p.y);
    const double sx = std::sin(kPi * p.x), cx = std::cos(kPi * p.x);
    const double s2y = std::sin(2 * kPi * p.y), c2y = std::cos(2 * kPi * p.y);

    Ex1Fields f;
    f.psi = et * cd(c2x, cy);
    f.psi_x = et * cd(-2 * kPi * s2x, 0.0);
    f.psi_y = et * cd(0.0, -kPi * sy);
    f.lap_psi = et * cd(-4 * kPi * kPi * c2x, -kPi * kPi * cy);
    f.a = {ey * sx, ex * s2y};
    f.div_a = kPi * ey * cx + 2 * kPi * ex * c2y;
    f.curl_curl_a = {-2 * kPi * ex * c2y - ey * sx, -ex * s2y - kPi * ey * cx};
    return f;
}

Vec2 supercurrent_exact(const Ex1Fields& f, double kappa)
{
    const double pr = f.psi.real(), pi = f.psi.imag();
    const Vec2 gpr{f.psi_x.real(), f.psi_y.real()};
    const Vec2 gpi{f.psi_x.imag(), f.psi_y.imag()};
    return (1.0 / kappa) * (pr * gpi - pi * gpr) - std::norm(f.psi) * f.a;
}

}  // namespace

ExactSolution exact_solution_ex1(Vec2 x, double t)
{
    const auto f = ex1_fields(x, t);
    const double h0 = -std::exp(t - x.x) * std::sin(2 * kPi * x.y) + std::exp(t - x.y) * std::sin(kPi * x.x);
    return {f.psi, f.a, h0};
}

std::array<std::complex<double>, 2> exact_grad_psi_ex1(Vec2 x, double t)
{
    const auto f = ex1_fields(x, t);
    return {f.psi_x, f.psi_y};
}

SourceValues manufactured_sources(Vec2 x, double t, double kappa, double sigma)
{
    const auto f = ex1_fields(x, t);
    const cd i(0.0, 1.0);
    const cd a_grad = f.a.x * f.psi_x + f.a.y * f.psi_y;
    const cd op = -f.lap_psi / (kappa * kappa) + (2.0 * i / kappa) * a_grad + (i / kappa) * f.div_a * f.psi +
                  dot(f.a, f.a) * f.psi;
    // ∂ₜψ = −ψ and ∂ₜA = A.
    const cd g = -f.psi + op - f.psi + std::norm(f.psi) * f.psi;
    const Vec2 force = sigma * f.a - supercurrent_exact(f, kappa) + f.curl_curl_a;
    return {g, force};
}

SourceTerms ex1_solver_sources(double kappa, double sigma)
{
    SourceTerms s;
    s.g = [kappa, sigma](Vec2 x, double t) { return manufactured_sources(x, t, kappa, sigma).g; };
    s.f = [kappa, sigma](Vec2 x, double t) {
        const auto f = ex1_fields(x, t);
        return sigma * f.a - supercurrent_exact(f, kappa);
    };
    return s;
}

ErrorNorms error_norms(const Discretization& disc, const State& state, double t)
{
    disc.check(state);
    const QuadratureRule rule = make_quadrature(6);
    const Mesh& mesh = disc.mesh();
    double a0 = 0, a1 = 0, r0 = 0, r1 = 0, i0 = 0, i1 = 0, d0 = 0;
    for (int e = 0; e < static_cast<int>(mesh.num_triangles()); ++e) {
        const auto& geom = disc.geometry(e);
        const auto vd = disc.p1().dofs(e);
        const auto ed = disc.nedelec().dofs(e);
        const auto& edges = mesh.triangle_edges(e);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto p1 = eval_p1(geom, rule.points[q]);
            const auto nd = eval_nedelec(geom, edges, rule.points[q]);
            const double w = 2.0 * geom.area * rule.weights[q];
            double pr = 0, pi = 0, curl = 0;
            Vec2 gpr, gpi, a;
            for (int k = 0; k < 3; ++k) {
                pr += state.psi_r[vd[k]] * p1.value[k];
                pi += state.psi_i[vd[k]] * p1.value[k];
                gpr += state.psi_r[vd[k]] * p1.grad[k];
                gpi += state.psi_i[vd[k]] * p1.grad[k];
            }
            for (int k = 0; k < 6; ++k) {
                a += state.a[ed[k]] * nd.value[k];
                curl += state.a[ed[k]] * nd.curl[k];
            }
            const Vec2 x = geom.map(rule.points[q]);
            const auto f = ex1_fields(x, t);
            const double h0 = exact_solution_ex1(x, t).h0;
            const Vec2 da = a - f.a;
            const Vec2 dgr = gpr - Vec2{f.psi_x.real(), f.psi_y.real()};
            const Vec2 dgi = gpi - Vec2{f.psi_x.imag(), f.psi_y.imag()};
            const double dd = pr * pr + pi * pi - std::norm(f.psi);
            a0 += w * dot(da, da);
            a1 += w * (curl - h0) * (curl - h0);
            r0 += w * (pr - f.psi.real()) * (pr - f.psi.real());
            r1 += w * dot(dgr, dgr);
            i0 += w * (pi - f.psi.imag()) * (pi - f.psi.imag());
            i1 += w * dot(dgi, dgi);
            d0 += w * dd * dd;
        }
    }
    return {std::sqrt(a0 + a1), std::sqrt(r0 + r1), std::sqrt(i0 + i1), std::sqrt(d0)};
}

Mesh Scenario::build_mesh() const
{
    switch (geometry) {
    case Geometry::UnitSquare:
        return build_unit_square_mesh(m);
    case Geometry::LShape:
        return build_lshape_mesh(m);
    case Geometry::SquareWithHoles:
        return build_square_with_holes_mesh(h_target);
    }
    throw std::logic_error("unknown geometry");
}

void Scenario::set_resolution(int new_m)
{
    if (new_m < 1) throw std::invalid_argument("M must be >= 1");
    m = new_m;
    if (dt_tied_to_m) params.dt = 1.0 / new_m;
}

std::vector<std::string> scenario_names()
{
    return {"ex1", "ex2", "ex3", "ex4-h08", "ex4-h11"};
}

namespace {

InitialData constant_initial(std::complex<double> psi0)
{
    InitialData d;
    d.a0 = [](Vec2) { return Vec2{}; };
    d.psi0 = [psi0](Vec2) { return psi0; };
    d.curl_a0 = [](Vec2) { return 0.0; };
    d.grad_psi0 = [](Vec2) { return std::array<std::complex<double>, 2>{}; };
    return d;
}

ScalarField constant_field(double h)
{
    return [h](Vec2, double) { return h; };
}

}  // namespace

Scenario make_scenario(const std::string& name)
{
    Scenario s;
    s.name = name;
    if (name == "ex1") {
        s.geometry = Geometry::UnitSquare;
        s.params.kappa = 1.0;
        s.params.sigma = 1.0;
        s.params.h_ext = [](Vec2 x, double t) { return exact_solution_ex1(x, t).h0; };
        s.initial.a0 = [](Vec2 x) { return exact_solution_ex1(x, 0.0).a; };
        s.initial.psi0 = [](Vec2 x) { return exact_solution_ex1(x, 0.0).psi; };
        s.initial.curl_a0 = [](Vec2 x) { return exact_solution_ex1(x, 0.0).h0; };
        s.initial.grad_psi0 = [](Vec2 x) { return exact_grad_psi_ex1(x, 0.0); };
        s.sources = ex1_solver_sources(1.0, 1.0);
        s.t_final = 1.0;
        s.snapshot_times = {1.0};
        s.has_exact_solution = true;
        s.set_resolution(16);
    } else if (name == "ex2" || name == "ex3") {
        s.geometry = name == "ex2" ? Geometry::UnitSquare : Geometry::LShape;
        s.params.kappa = 10.0;
        s.params.sigma = 1.0;
        s.params.h_ext = constant_field(5.0);
        s.initial = constant_initial({0.6, 0.8});
        if (name == "ex2") {
            s.t_final = 20.0;
            s.snapshot_times = {2, 6, 10, 15, 20};
        } else {
            s.t_final = 40.0;
            s.snapshot_times = {5, 10, 25, 40};
        }
        s.set_resolution(16);
    } else if (name == "ex4-h08" || name == "ex4-h11") {
        const bool low = name == "ex4-h08";
        s.geometry = Geometry::SquareWithHoles;
        s.dt_tied_to_m = false;
        s.h_target = low ? 0.15 : 0.025;
        s.params.kappa = 4.0;
        s.params.sigma = 1.0;
        s.params.dt = 0.02;
        s.params.h_ext = constant_field(low ? 0.8 : 1.1);
        s.initial = constant_initial({1.0, 0.0});
        s.t_final = 500.0;
        s.snapshot_times = low ? std::vector<double>{10, 20, 50, 300, 500} : std::vector<double>{10, 20, 50, 100, 500};
    } else {
        throw std::invalid_argument("unknown scenario '" + name + "'");
    }
    return s;
}

std::vector<Scenario> builtin_scenarios()
{
    std::vector<Scenario> out;
    for (const auto& n : scenario_names()) out.push_back(make_scenario(n));
    return out;
}

}  // namespace tdgl
