#pragma once

#include <functional>
#include <span>
#include <vector>

#include "tdgl/cholesky.hpp"

namespace tdgl {

/// y = Op(x); x and y never alias.
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

struct GmresOptions {
    double rel_tol = 1e-8;
    int max_iter = 500;
    /// Krylov dimension before restart; 0 means no restart.
    int restart = 0;
};

struct GmresResult {
    std::vector<double> x;
    int iterations = 0;
    bool converged = false;
    /// Happy breakdown: the Krylov space became invariant.
    bool breakdown = false;
    /// ‖b - A x_k‖ / ‖b‖ per iteration from the Arnoldi recurrence; entry 0
    /// is the initial residual.
    std::vector<double> residual_history;
    /// Recomputed ‖b - A x‖ / ‖b‖ for the returned iterate.
    double true_relative_residual = 0.0;
};

/// Right-preconditioned GMRES from a zero initial guess: solves
/// A M⁻¹ y = b and returns x = M⁻¹ y. Pass an empty `precond` for the
/// unpreconditioned method. Convergence is judged on the true residual.
GmresResult gmres(const LinearOperator& apply_matrix, const LinearOperator& precond,
                  std::span<const double> rhs, const GmresOptions& options = {});

/// M⁻¹ for a block-diagonal M whose blocks are factorized independently.
class BlockDiagonalPreconditioner {
public:
    explicit BlockDiagonalPreconditioner(std::vector<FactorizedSpd> blocks);

    std::size_t size() const { return offsets_.back(); }
    const std::vector<std::size_t>& offsets() const { return offsets_; }
    void apply(std::span<const double> x, std::span<double> y) const;
    LinearOperator as_operator() const;

private:
    std::vector<FactorizedSpd> blocks_;
    std::vector<std::size_t> offsets_;
};

}  // namespace tdgl
