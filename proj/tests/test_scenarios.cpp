#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "tdgl/scenarios.hpp"

using namespace tdgl;
using cd = std::complex<double>;

namespace {

constexpr double kH = 1e-3;

// Fourth-order central difference of a scalar-valued function of one variable.
template <class F>
auto d1(F f, double h = kH)
{
    return (f(-2 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2 * h)) / (12 * h);
}

cd psi(Vec2 x, double t) { return exact_solution_ex1(x, t).psi; }
Vec2 pot(Vec2 x, double t) { return exact_solution_ex1(x, t).a; }

std::array<cd, 2> grad_psi(Vec2 x, double t)
{
    return {d1([&](double s) { return psi({x.x + s, x.y}, t); }),
            d1([&](double s) { return psi({x.x, x.y + s}, t); })};
}

// Π = (i/κ)∇ψ + Aψ.
std::array<cd, 2> pi_field(Vec2 x, double t, double kappa)
{
    const cd i(0, 1);
    const auto g = grad_psi(x, t);
    const Vec2 a = pot(x, t);
    return {(i / kappa) * g[0] + a.x * psi(x, t), (i / kappa) * g[1] + a.y * psi(x, t)};
}

double curl(Vec2 x, double t)
{
    return d1([&](double s) { return pot({x.x + s, x.y}, t).y; }) -
           d1([&](double s) { return pot({x.x, x.y + s}, t).x; });
}

// Residual-form oracle of both equations, built only from the exact fields.
SourceValues fd_sources(Vec2 x, double t, double kappa, double sigma)
{
    const cd i(0, 1);
    const cd p = psi(x, t);
    const Vec2 a = pot(x, t);
    const auto pf = pi_field(x, t, kappa);
    const cd div_pi = d1([&](double s) { return pi_field({x.x + s, x.y}, t, kappa)[0]; }) +
                      d1([&](double s) { return pi_field({x.x, x.y + s}, t, kappa)[1]; });
    const cd op = (i / kappa) * div_pi + a.x * pf[0] + a.y * pf[1];
    const cd dt_psi = d1([&](double s) { return psi(x, t + s); });
    const cd g = dt_psi + op - p + std::norm(p) * p;

    // j_s = −Re[ψ* Π].
    const Vec2 js{-std::real(std::conj(p) * pf[0]), -std::real(std::conj(p) * pf[1])};
    const Vec2 dt_a{d1([&](double s) { return pot(x, t + s).x; }), d1([&](double s) { return pot(x, t + s).y; })};
    const Vec2 cc{d1([&](double s) { return curl({x.x, x.y + s}, t); }),
                  -d1([&](double s) { return curl({x.x + s, x.y}, t); })};
    return {g, sigma * dt_a - js + cc};
}

}  // namespace

TEST(Scenarios, ExactSolutionValues)
{
    const auto o = exact_solution_ex1({0, 0}, 0);
    EXPECT_DOUBLE_EQ(o.psi.real(), 1.0);
    EXPECT_DOUBLE_EQ(o.psi.imag(), 1.0);
    EXPECT_DOUBLE_EQ(o.a.x, 0.0);
    EXPECT_DOUBLE_EQ(o.a.y, 0.0);
    const auto c = exact_solution_ex1({0.5, 0.5}, 0);
    EXPECT_NEAR(c.psi.real(), -1.0, 1e-15);
    EXPECT_NEAR(c.psi.imag(), 0.0, 1e-15);
}

TEST(Scenarios, BoundaryDatumIsCurlOfA)
{
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const Vec2 x{u(gen), u(gen)};
        const double t = u(gen);
        EXPECT_NEAR(exact_solution_ex1(x, t).h0, curl(x, t), 1e-9);
    }
}

TEST(Scenarios, ManufacturedSourcesMatchFiniteDifferenceOracle)
{
    std::mt19937 gen(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double kappa : {1.0, 2.0}) {
        for (int k = 0; k < 100; ++k) {
            const Vec2 x{u(gen), u(gen)};
            const double t = u(gen);
            const auto want = fd_sources(x, t, kappa, 1.0);
            const auto got = manufactured_sources(x, t, kappa, 1.0);
            EXPECT_NEAR(std::abs(got.g - want.g), 0.0, 1e-6);
            EXPECT_NEAR(got.f.x, want.f.x, 1e-6);
            EXPECT_NEAR(got.f.y, want.f.y, 1e-6);
        }
    }
    // Away-from-origin spot check where cos 2πx = cos πy = 0.
    const Vec2 x{0.25, 0.5};
    const auto want = fd_sources(x, 0.3, 1.0, 1.0);
    const auto got = manufactured_sources(x, 0.3, 1.0, 1.0);
    EXPECT_NEAR(std::abs(got.g - want.g), 0.0, 1e-6);
}

TEST(Scenarios, SolverSourcesDifferByVectorCurlOfH)
{
    const SourceTerms s = ex1_solver_sources();
    std::mt19937 gen(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const Vec2 x{u(gen), u(gen)};
        const double t = u(gen);
        const auto full = manufactured_sources(x, t);
        const Vec2 vc{d1([&](double h) { return exact_solution_ex1({x.x, x.y + h}, t).h0; }),
                      -d1([&](double h) { return exact_solution_ex1({x.x + h, x.y}, t).h0; })};
        const Vec2 f = s.f(x, t);
        EXPECT_NEAR(f.x + vc.x, full.f.x, 1e-7);
        EXPECT_NEAR(f.y + vc.y, full.f.y, 1e-7);
        EXPECT_EQ(s.g(x, t), full.g);
    }
}

TEST(Scenarios, ExactSolutionSatisfiesNaturalBoundaryConditions)
{
    for (double s : {0.0, 0.3, 0.77, 1.0}) {
        for (double t : {0.0, 0.5}) {
            const auto gx0 = exact_grad_psi_ex1({0.0, s}, t);
            const auto gx1 = exact_grad_psi_ex1({1.0, s}, t);
            const auto gy0 = exact_grad_psi_ex1({s, 0.0}, t);
            const auto gy1 = exact_grad_psi_ex1({s, 1.0}, t);
            EXPECT_NEAR(std::abs(gx0[0]) + std::abs(gx1[0]) + std::abs(gy0[1]) + std::abs(gy1[1]), 0.0, 1e-12);
            EXPECT_NEAR(exact_solution_ex1({0.0, s}, t).a.x, 0.0, 1e-12);
            EXPECT_NEAR(exact_solution_ex1({1.0, s}, t).a.x, 0.0, 1e-12);
            EXPECT_NEAR(exact_solution_ex1({s, 0.0}, t).a.y, 0.0, 1e-12);
            EXPECT_NEAR(exact_solution_ex1({s, 1.0}, t).a.y, 0.0, 1e-12);
        }
    }
}

TEST(Scenarios, InterpolationErrorsDecreaseAtFirstOrder)
{
    double prev_a = 0, prev_r = 0;
    for (int m : {8, 16, 32}) {
        const Discretization disc(build_unit_square_mesh(m));
        State s = disc.zero_state();
        const double t = 0.5;
        s.a = disc.nedelec().interpolate([t](Vec2 x) { return exact_solution_ex1(x, t).a; });
        s.psi_r = disc.p1().interpolate([t](Vec2 x) { return exact_solution_ex1(x, t).psi.real(); });
        s.psi_i = disc.p1().interpolate([t](Vec2 x) { return exact_solution_ex1(x, t).psi.imag(); });
        const auto e = error_norms(disc, s, t);
        EXPECT_GT(e.e_a, 0.0);
        EXPECT_GT(e.e_r, 0.0);
        EXPECT_GT(e.e_i, 0.0);
        EXPECT_GT(e.e_d, 0.0);
        if (prev_a > 0) {
            EXPECT_NEAR(std::log2(prev_a / e.e_a), 1.0, 0.1);
            EXPECT_NEAR(std::log2(prev_r / e.e_r), 1.0, 0.1);
        }
        prev_a = e.e_a;
        prev_r = e.e_r;
    }
}

TEST(Scenarios, Catalog)
{
    const auto all = builtin_scenarios();
    ASSERT_EQ(all.size(), 5u);
    const Scenario ex2 = make_scenario("ex2");
    EXPECT_DOUBLE_EQ(ex2.params.kappa, 10.0);
    EXPECT_DOUBLE_EQ(ex2.params.applied_field({0.3, 0.3}, 1.0), 5.0);
    EXPECT_NEAR(std::norm(ex2.initial.psi0({0.1, 0.2})), 1.0, 1e-15);
    EXPECT_EQ(ex2.snapshot_times, (std::vector<double>{2, 6, 10, 15, 20}));
    EXPECT_DOUBLE_EQ(ex2.params.dt, 1.0 / 16);
    const Scenario ex3 = make_scenario("ex3");
    EXPECT_EQ(ex3.geometry, Geometry::LShape);
    EXPECT_EQ(ex3.snapshot_times, (std::vector<double>{5, 10, 25, 40}));
    const Scenario ex4 = make_scenario("ex4-h08");
    EXPECT_DOUBLE_EQ(ex4.params.kappa, 4.0);
    EXPECT_DOUBLE_EQ(ex4.params.dt, 0.02);
    EXPECT_DOUBLE_EQ(ex4.params.applied_field({1, 1}, 0), 0.8);
    EXPECT_NEAR(ex4.build_mesh().total_area(), 96.0, 1e-9);
    EXPECT_EQ(ex4.snapshot_times, (std::vector<double>{10, 20, 50, 300, 500}));
    EXPECT_DOUBLE_EQ(make_scenario("ex4-h11").params.applied_field({1, 1}, 0), 1.1);
    EXPECT_THROW(make_scenario("ex5"), std::invalid_argument);
    Scenario ex1 = make_scenario("ex1");
    ex1.set_resolution(8);
    EXPECT_DOUBLE_EQ(ex1.params.dt, 0.125);
}
