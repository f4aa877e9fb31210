#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdgl/sparse.hpp"

namespace tdgl {

/// Raised when a Cholesky pivot is not strictly positive.
class NotPositiveDefinite : public std::runtime_error {
public:
    NotPositiveDefinite(int pivot, double value)
        : std::runtime_error("matrix is not positive definite: pivot " + std::to_string(pivot) +
                             " = " + std::to_string(value)),
          pivot_(pivot), value_(value)
    {
    }

    /// Row of the input matrix (original numbering) whose pivot failed.
    int pivot() const { return pivot_; }
    double value() const { return value_; }

private:
    int pivot_;
    double value_;
};

/// Sparse Cholesky factor P A Pᵀ = L Lᵀ of a symmetric positive-definite
/// matrix, with a fill-reducing approximate-minimum-degree permutation.
/// Immutable after construction; `solve` is reentrant.
class FactorizedSpd {
public:
    FactorizedSpd() = default;

    std::size_t size() const { return n_; }
    std::size_t factor_nnz() const { return row_idx_.size(); }

    void solve(std::span<const double> b, std::span<double> x) const;
    std::vector<double> solve(std::span<const double> b) const;

    friend FactorizedSpd factorize_spd(const CsrMatrix& a);

private:
    std::size_t n_ = 0;
    std::vector<int> order_;  // order_[new] = old
    std::vector<int> col_ptr_;
    std::vector<int> row_idx_;
    std::vector<double> values_;  // column-major L, diagonal first in each column
};

/// Only the lower triangle (j <= i) of `a` is read.
/// Throws NotPositiveDefinite with the failing row.
FactorizedSpd factorize_spd(const CsrMatrix& a);

}  // namespace tdgl
