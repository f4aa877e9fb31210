#include "tdgl/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tdgl {

LineRule gauss_legendre(int n)
{
    if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
    LineRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton on P_n starting from the Chebyshev-like guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double pn = n == 1 ? x : p1;
            const double pn1 = n == 1 ? 1.0 : p0;
            dp = n * (x * pn - pn1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        }
        rule.points[n - 1 - i] = 0.5 * (x + 1.0);
        rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

QuadratureRule make_quadrature(int degree)
{
    if (degree != 2 && degree != 4 && degree != 6 && degree != 8) {
        throw std::invalid_argument("unsupported quadrature degree " + std::to_string(degree));
    }
    // The collapse (u, v) -> (u, v(1-u)) adds one power of (1-u).
    const int n = (degree + 3) / 2;
    const LineRule line = gauss_legendre(n);

    QuadratureRule rule;
    rule.degree = degree;
    for (int i = 0; i < n; ++i) {
        const double u = line.points[i];
        for (int j = 0; j < n; ++j) {
            const double xi = u;
            const double eta = line.points[j] * (1.0 - u);
            rule.points.push_back({1.0 - xi - eta, xi, eta});
            rule.weights.push_back(line.weights[i] * line.weights[j] * (1.0 - u));
        }
    }
    return rule;
}

}  // namespace tdgl
