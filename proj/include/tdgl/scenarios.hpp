#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "tdgl/assembly.hpp"
#include "tdgl/mesh.hpp"

namespace tdgl {

struct ExactSolution {
    std::complex<double> psi;
    Vec2 a;
    /// Boundary datum H₀ = ∇×A.
    double h0 = 0.0;
};

/// Manufactured solution on the unit square:
/// ψ = e^{-t}(cos 2πx + i cos πy), A = (e^{t-y} sin πx, e^{t-x} sin 2πy).
ExactSolution exact_solution_ex1(Vec2 x, double t);
/// ∇ψ of the manufactured solution, as (∂ₓψ, ∂ᵧψ).
std::array<std::complex<double>, 2> exact_grad_psi_ex1(Vec2 x, double t);

struct SourceValues {
    std::complex<double> g;
    Vec2 f;
};

/// g = ∂ₜψ + ((i/κ)∇ + A)²ψ − ψ + |ψ|²ψ and
/// f = σ∂ₜA − j_s + ∇×∇×A for the manufactured solution.
SourceValues manufactured_sources(Vec2 x, double t, double kappa = 1.0, double sigma = 1.0);

/// Sources handed to the solver for Example 1. The applied field is
/// H₀(x, t), whose domain form already supplies ∇×∇×A, so f here is
/// σ∂ₜA − j_s.
SourceTerms ex1_solver_sources(double kappa = 1.0, double sigma = 1.0);

struct ErrorNorms {
    double e_a = 0.0;  ///< H(curl) error of A
    double e_r = 0.0;  ///< H¹ error of Re ψ
    double e_i = 0.0;  ///< H¹ error of Im ψ
    double e_d = 0.0;  ///< L² error of |ψ|²
};

/// Errors against the manufactured solution at time t, degree-6 quadrature.
ErrorNorms error_norms(const Discretization& disc, const State& state, double t);

enum class Geometry { UnitSquare, LShape, SquareWithHoles };

struct Scenario {
    std::string name;
    Geometry geometry = Geometry::UnitSquare;
    /// Cells per unit length (unit square, L-shape).
    int m = 16;
    /// Target mesh size (square with holes).
    double h_target = 0.15;
    Params params;
    InitialData initial;
    std::optional<SourceTerms> sources;
    double t_final = 1.0;
    std::vector<double> snapshot_times;
    bool has_exact_solution = false;
    /// Δt follows 1/M when true.
    bool dt_tied_to_m = true;

    Mesh build_mesh() const;
    /// Sets M and, when tied, Δt = 1/M.
    void set_resolution(int m);
};

/// ex1, ex2, ex3, ex4-h08, ex4-h11.
std::vector<std::string> scenario_names();
/// Throws std::invalid_argument for an unknown name.
Scenario make_scenario(const std::string& name);
std::vector<Scenario> builtin_scenarios();

}  // namespace tdgl
