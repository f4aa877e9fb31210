#include "tdgl/cholesky.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>

namespace tdgl {

namespace {

std::vector<int> amd_order(const CsrMatrix& a)
{
    const auto n = static_cast<int>(a.rows());
    std::vector<Eigen::Triplet<double, int>> triplets;
    triplets.reserve(a.nnz());
    const auto ptr = a.row_ptr();
    const auto col = a.col_idx();
    for (int i = 0; i < n; ++i) {
        for (int p = ptr[i]; p < ptr[i + 1]; ++p) triplets.emplace_back(i, col[p], 1.0);
    }
    Eigen::SparseMatrix<double, Eigen::ColMajor, int> pattern(n, n);
    pattern.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm;
    Eigen::AMDOrdering<int> amd;
    amd(pattern, perm);

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = perm.indices()[i];
    return order;
}

}  // namespace

FactorizedSpd factorize_spd(const CsrMatrix& a)
{
    if (a.rows() != a.cols()) throw std::invalid_argument("Cholesky needs a square matrix");
    const int n = static_cast<int>(a.rows());

    FactorizedSpd f;
    f.n_ = a.rows();
    f.order_ = amd_order(a);
    std::vector<int> pos(n);
    for (int k = 0; k < n; ++k) pos[f.order_[k]] = k;

    // Lower triangle of C = P A Pᵀ by rows: row k lists C(k, j), j <= k.
    std::vector<int> c_ptr(n + 1, 0);
    std::vector<int> c_col;
    std::vector<double> c_val;
    {
        const auto ptr = a.row_ptr();
        const auto col = a.col_idx();
        const auto val = a.values();
        std::vector<std::vector<std::pair<int, double>>> rows(n);
        for (int i = 0; i < n; ++i) {
            for (int p = ptr[i]; p < ptr[i + 1]; ++p) {
                const int j = col[p];
                if (j > i) continue;
                const int ni = pos[i];
                const int nj = pos[j];
                if (nj <= ni) {
                    rows[ni].emplace_back(nj, val[p]);
                } else {
                    rows[nj].emplace_back(ni, val[p]);
                }
            }
        }
        for (int k = 0; k < n; ++k) {
            for (const auto& [j, v] : rows[k]) {
                c_col.push_back(j);
                c_val.push_back(v);
            }
            c_ptr[k + 1] = static_cast<int>(c_col.size());
        }
    }

    // Elimination tree with path compression.
    std::vector<int> parent(n, -1);
    {
        std::vector<int> ancestor(n, -1);
        for (int k = 0; k < n; ++k) {
            for (int p = c_ptr[k]; p < c_ptr[k + 1]; ++p) {
                int i = c_col[p];
                while (i != -1 && i < k) {
                    const int next = ancestor[i];
                    ancestor[i] = k;
                    if (next == -1) parent[i] = k;
                    i = next;
                }
            }
        }
    }

    // Row k of L is the etree reach of row k of C; `stack[top..n)` holds it
    // in topological order.
    std::vector<int> mark(n, -1);
    std::vector<int> stack(n);
    auto ereach = [&](int k) {
        int top = n;
        mark[k] = k;
        for (int p = c_ptr[k]; p < c_ptr[k + 1]; ++p) {
            int i = c_col[p];
            if (i > k) continue;
            int len = 0;
            for (; mark[i] != k; i = parent[i]) {
                stack[len++] = i;
                mark[i] = k;
            }
            while (len > 0) stack[--top] = stack[--len];
        }
        return top;
    };

    std::vector<int> counts(n, 1);
    for (int k = 0; k < n; ++k) {
        for (int top = ereach(k); top < n; ++top) ++counts[stack[top]];
    }
    std::fill(mark.begin(), mark.end(), -1);

    f.col_ptr_.assign(n + 1, 0);
    std::partial_sum(counts.begin(), counts.end(), f.col_ptr_.begin() + 1);
    f.row_idx_.resize(f.col_ptr_[n]);
    f.values_.resize(f.col_ptr_[n]);
    std::vector<int> next(f.col_ptr_.begin(), f.col_ptr_.end() - 1);

    std::vector<double> x(n, 0.0);
    for (int k = 0; k < n; ++k) {
        const int top = ereach(k);
        for (int p = c_ptr[k]; p < c_ptr[k + 1]; ++p) x[c_col[p]] += c_val[p];
        double d = x[k];
        x[k] = 0.0;
        for (int s = top; s < n; ++s) {
            const int j = stack[s];
            const double lkj = x[j] / f.values_[f.col_ptr_[j]];
            x[j] = 0.0;
            for (int p = f.col_ptr_[j] + 1; p < next[j]; ++p) x[f.row_idx_[p]] -= f.values_[p] * lkj;
            d -= lkj * lkj;
            f.row_idx_[next[j]] = k;
            f.values_[next[j]++] = lkj;
        }
        if (!(d > 0.0)) throw NotPositiveDefinite(f.order_[k], d);
        f.row_idx_[next[k]] = k;
        f.values_[next[k]++] = std::sqrt(d);
    }
    return f;
}

void FactorizedSpd::solve(std::span<const double> b, std::span<double> x) const
{
    const int n = static_cast<int>(n_);
    std::vector<double> y(n);
    for (int k = 0; k < n; ++k) y[k] = b[order_[k]];
    for (int j = 0; j < n; ++j) {
        y[j] /= values_[col_ptr_[j]];
        const double yj = y[j];
        for (int p = col_ptr_[j] + 1; p < col_ptr_[j + 1]; ++p) y[row_idx_[p]] -= values_[p] * yj;
    }
    for (int j = n - 1; j >= 0; --j) {
        double s = y[j];
        for (int p = col_ptr_[j] + 1; p < col_ptr_[j + 1]; ++p) s -= values_[p] * y[row_idx_[p]];
        y[j] = s / values_[col_ptr_[j]];
    }
    for (int k = 0; k < n; ++k) x[order_[k]] = y[k];
}

std::vector<double> FactorizedSpd::solve(std::span<const double> b) const
{
    std::vector<double> x(n_);
    solve(b, x);
    return x;
}

}  // namespace tdgl
