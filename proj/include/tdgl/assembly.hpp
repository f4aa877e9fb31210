#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "tdgl/mesh.hpp"
#include "tdgl/quadrature.hpp"
#include "tdgl/sparse.hpp"
#include "tdgl/spaces.hpp"

namespace tdgl {

using ScalarField = std::function<double(Vec2, double)>;
using VectorField = std::function<Vec2(Vec2, double)>;
using ComplexField = std::function<std::complex<double>(Vec2, double)>;

/// Discrete unknowns: A_h over the Nédélec space and the real and imaginary
/// parts of ψ_h over P1.
struct State {
    std::vector<double> a;
    std::vector<double> psi_r;
    std::vector<double> psi_i;
};

struct Params {
    double kappa = 1.0;
    double sigma = 1.0;
    double dt = 0.1;
    /// Applied field H(x, t); zero when empty.
    ScalarField h_ext;

    void validate() const;
    double applied_field(Vec2 x, double t) const { return h_ext ? h_ext(x, t) : 0.0; }
};

/// Right-hand sides g (order-parameter equation) and f (potential equation).
struct SourceTerms {
    ComplexField g;
    VectorField f;
};

struct InitialData {
    std::function<Vec2(Vec2)> a0;
    std::function<std::complex<double>(Vec2)> psi0;
    /// Optional derivatives; central differences are used when empty.
    std::function<double(Vec2)> curl_a0;
    std::function<std::array<std::complex<double>, 2>(Vec2)> grad_psi0;
};

/// Mesh, spaces, cached element geometry and the sparsity of the coupled
/// system. Unknowns are ordered (ψ_r | ψ_i | A).
class Discretization {
public:
    explicit Discretization(Mesh mesh);

    const Mesh& mesh() const { return *mesh_; }
    const P1Space& p1() const { return p1_; }
    const NedelecSpace& nedelec() const { return nedelec_; }
    const ElementGeometry& geometry(int t) const { return geometry_[t]; }
    /// Degree-4 rule used for every nonlinear integrand.
    const QuadratureRule& rule() const { return rule_; }

    std::size_t num_scalar() const { return p1_.dof_count(); }
    std::size_t num_vector() const { return nedelec_.dof_count(); }
    std::size_t num_total() const { return 2 * num_scalar() + num_vector(); }
    std::size_t psi_i_offset() const { return num_scalar(); }
    std::size_t a_offset() const { return 2 * num_scalar(); }

    /// Global unknown numbers of the 12 local functions of triangle t.
    std::array<int, 12> block_dofs(int t) const;

    const CsrMatrix& block_pattern() const { return block_pattern_; }
    const CsrMatrix& scalar_pattern() const { return scalar_pattern_; }
    const CsrMatrix& vector_pattern() const { return vector_pattern_; }

    State zero_state() const;
    std::vector<double> pack(const State& s) const;
    State unpack(std::span<const double> x) const;
    /// Throws std::invalid_argument on wrong sizes or non-finite entries.
    void check(const State& s) const;

private:
    std::shared_ptr<const Mesh> mesh_;
    P1Space p1_;
    NedelecSpace nedelec_;
    std::vector<ElementGeometry> geometry_;
    QuadratureRule rule_;
    CsrMatrix block_pattern_;
    CsrMatrix scalar_pattern_;
    CsrMatrix vector_pattern_;
};

/// ‖(i/κ)∇ψ + Aψ‖² + ½‖|ψ|² − 1‖² + ‖∇×A − H‖² at time t.
double gibbs_energy(const Discretization& disc, const State& state, const Params& params, double t);

/// Newton right-hand side of one backward-Euler step: the prior-step mass
/// terms, applied field (H, ∇×Ã) and sources at t_next, minus the nonlinear
/// forms G_r, G_i, G_A at `state`. Zero exactly when `state` solves the step.
std::vector<double> assemble_residual(const Discretization& disc, const State& state,
                                      const State& prev, const Params& params,
                                      const SourceTerms* sources, double t_next);

/// Derivative of G_r + G_i + G_A at `state`, rows and columns ordered
/// (ψ_r | ψ_i | A).
CsrMatrix assemble_jacobian(const Discretization& disc, const State& state, const Params& params);

struct PreconditionerBlocks {
    CsrMatrix psi_r;
    CsrMatrix psi_i;
    CsrMatrix a;
};

/// (1/Δt)M + κ⁻²K for both scalar blocks and (σ/Δt)M + K_curl for A.
/// Depends only on the parameters.
PreconditionerBlocks assemble_preconditioner_blocks(const Discretization& disc, const Params& params);

/// wᵀ P w for a packed vector w.
double triple_norm_squared(const PreconditionerBlocks& blocks, const Discretization& disc,
                           std::span<const double> w);

/// H(curl) projection of A₀ and H¹ projection of Re ψ₀, Im ψ₀.
State initial_projection(const Discretization& disc, const InitialData& data);

/// j_s = (1/κ)(ψ_r∇ψ_i − ψ_i∇ψ_r) − |ψ|²A at each quadrature point of `rule`,
/// indexed [triangle][point].
std::vector<std::vector<Vec2>> supercurrent(const Discretization& disc, const State& state,
                                            const Params& params, const QuadratureRule& rule);

/// Area average of j_s over each triangle.
std::vector<Vec2> supercurrent_average(const Discretization& disc, const State& state,
                                       const Params& params);

/// ∇×A_h, constant on each triangle.
std::vector<double> curl_field(const Discretization& disc, const State& state);

/// max over vertices of |ψ_h|.
double max_abs_psi(const State& state);

}  // namespace tdgl
