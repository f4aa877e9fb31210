#include "tdgl/gmres.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tdgl/sparse.hpp"

namespace tdgl {

namespace {

void givens(double a, double b, double& c, double& s)
{
    if (b == 0.0) {
        c = 1.0;
        s = 0.0;
    } else {
        const double r = std::hypot(a, b);
        c = a / r;
        s = b / r;
    }
}

}  // namespace

GmresResult gmres(const LinearOperator& apply_matrix, const LinearOperator& precond,
                  std::span<const double> rhs, const GmresOptions& options)
{
    if (!(options.rel_tol > 0.0 && options.rel_tol < 1.0)) {
        throw std::invalid_argument("GMRES rel_tol must lie in (0, 1)");
    }
    if (options.max_iter < 1) throw std::invalid_argument("GMRES max_iter must be >= 1");

    const std::size_t n = rhs.size();
    GmresResult result;
    result.x.assign(n, 0.0);

    const double bnorm = norm2(rhs);
    if (bnorm == 0.0) {
        result.converged = true;
        result.residual_history.push_back(0.0);
        return result;
    }
    const double target = options.rel_tol * bnorm;
    const int m_max = options.restart > 0 ? std::min(options.restart, options.max_iter) : options.max_iter;

    std::vector<double> r(rhs.begin(), rhs.end());
    std::vector<double> z(n), w(n), update(n);
    double beta = bnorm;
    result.residual_history.push_back(1.0);

    std::vector<std::vector<double>> basis;
    std::vector<std::vector<double>> hess;  // column j holds H(0..j+1, j)
    std::vector<double> cs, sn, g;

    while (true) {
        basis.clear();
        hess.clear();
        cs.clear();
        sn.clear();
        g.assign(1, beta);
        basis.emplace_back(n);
        for (std::size_t i = 0; i < n; ++i) basis[0][i] = r[i] / beta;

        int j = 0;
        bool stop = false;
        for (; j < m_max && !stop; ++j) {
            if (precond) {
                precond(basis[j], z);
                apply_matrix(z, w);
            } else {
                apply_matrix(basis[j], w);
            }
            const double wnorm0 = norm2(w);

            std::vector<double> h(j + 2, 0.0);
            for (int i = 0; i <= j; ++i) {
                h[i] = dot(w, basis[i]);
                for (std::size_t k = 0; k < n; ++k) w[k] -= h[i] * basis[i][k];
            }
            h[j + 1] = norm2(w);
            const double h_next = h[j + 1];
            const bool happy = h_next <= 1e-14 * wnorm0;

            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * h[i] + sn[i] * h[i + 1];
                h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
                h[i] = t;
            }
            double c, s;
            givens(h[j], h[j + 1], c, s);
            cs.push_back(c);
            sn.push_back(s);
            h[j] = c * h[j] + s * h[j + 1];
            h[j + 1] = 0.0;
            g.push_back(-s * g[j]);
            g[j] *= c;
            hess.push_back(std::move(h));

            ++result.iterations;
            result.residual_history.push_back(std::abs(g[j + 1]) / bnorm);

            if (happy) {
                result.breakdown = true;
                stop = true;
            } else if (std::abs(g[j + 1]) <= target || result.iterations >= options.max_iter) {
                stop = true;
            } else {
                basis.emplace_back(n);
                for (std::size_t k = 0; k < n; ++k) basis[j + 1][k] = w[k] / h_next;
            }
        }

        // Back substitution for the least-squares coefficients.
        const int k_dim = j;
        std::vector<double> y(k_dim);
        for (int i = k_dim - 1; i >= 0; --i) {
            double s = g[i];
            for (int l = i + 1; l < k_dim; ++l) s -= hess[l][i] * y[l];
            y[i] = s / hess[i][i];
        }
        std::fill(update.begin(), update.end(), 0.0);
        for (int i = 0; i < k_dim; ++i) {
            for (std::size_t k = 0; k < n; ++k) update[k] += y[i] * basis[i][k];
        }
        if (precond) {
            precond(update, z);
            for (std::size_t k = 0; k < n; ++k) result.x[k] += z[k];
        } else {
            for (std::size_t k = 0; k < n; ++k) result.x[k] += update[k];
        }

        apply_matrix(result.x, w);
        for (std::size_t k = 0; k < n; ++k) r[k] = rhs[k] - w[k];
        beta = norm2(r);
        result.true_relative_residual = beta / bnorm;

        if (result.breakdown || beta <= target) {
            result.converged = true;
            return result;
        }
        if (result.iterations >= options.max_iter) return result;
    }
}

BlockDiagonalPreconditioner::BlockDiagonalPreconditioner(std::vector<FactorizedSpd> blocks)
    : blocks_(std::move(blocks)), offsets_{0}
{
    for (const auto& b : blocks_) offsets_.push_back(offsets_.back() + b.size());
}

void BlockDiagonalPreconditioner::apply(std::span<const double> x, std::span<double> y) const
{
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const std::size_t off = offsets_[b];
        const std::size_t len = blocks_[b].size();
        blocks_[b].solve(x.subspan(off, len), y.subspan(off, len));
    }
}

LinearOperator BlockDiagonalPreconditioner::as_operator() const
{
    return [this](std::span<const double> x, std::span<double> y) { apply(x, y); };
}

}  // namespace tdgl
