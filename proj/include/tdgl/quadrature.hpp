#pragma once

#include <array>
#include <vector>

namespace tdgl {

/// Quadrature on the reference triangle (0,0), (1,0), (0,1). Points are
/// barycentric coordinates (λ0, λ1, λ2); weights sum to the reference area 1/2.
struct QuadratureRule {
    int degree = 0;
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
};

/// Gauss rule on [0, 1]; weights sum to 1.
struct LineRule {
    std::vector<double> points;
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
};

/// Gauss-Legendre nodes and weights mapped to [0, 1].
LineRule gauss_legendre(int n);

/// Collapsed (Duffy) tensor Gauss rule exact for all polynomials of total
/// degree <= `degree`. Supported degrees: 2, 4, 6, 8.
QuadratureRule make_quadrature(int degree);

}  // namespace tdgl
