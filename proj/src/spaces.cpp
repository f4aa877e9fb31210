#include "tdgl/spaces.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tdgl {

ElementGeometry make_element_geometry(const Mesh& mesh, int t)
{
    ElementGeometry g;
    const auto& tri = mesh.triangle(t);
    for (int k = 0; k < 3; ++k) g.vertex[k] = mesh.vertex(tri[k]);

    const double twice_area = cross(g.vertex[1] - g.vertex[0], g.vertex[2] - g.vertex[0]);
    if (!(std::abs(twice_area) > 0.0)) {
        throw std::invalid_argument("degenerate triangle " + std::to_string(t));
    }
    g.area = 0.5 * twice_area;
    // grad λ_k is the inward normal of the opposite edge scaled by 1/(2A).
    for (int k = 0; k < 3; ++k) {
        const Vec2 e = g.vertex[(k + 2) % 3] - g.vertex[(k + 1) % 3];
        g.grad_lambda[k] = Vec2{-e.y / twice_area, e.x / twice_area};
    }
    return g;
}

P1Values eval_p1(const ElementGeometry& geom, const Barycentric& b)
{
    return P1Values{b, geom.grad_lambda};
}

NedelecValues eval_nedelec(const ElementGeometry& geom, const std::array<EdgeRef, 3>& edges,
                           const Barycentric& b)
{
    NedelecValues out;
    for (int k = 0; k < 3; ++k) {
        int lo = k;
        int hi = (k + 1) % 3;
        if (edges[k].sign < 0) std::swap(lo, hi);
        const Vec2& glo = geom.grad_lambda[lo];
        const Vec2& ghi = geom.grad_lambda[hi];
        // Dual combinations of λ_lo ∇λ_hi and -λ_hi ∇λ_lo.
        out.value[2 * k] = 4.0 * b[lo] * ghi + 2.0 * b[hi] * glo;
        out.value[2 * k + 1] = -4.0 * b[hi] * glo - 2.0 * b[lo] * ghi;
        const double c = 2.0 * cross(glo, ghi);
        out.curl[2 * k] = c;
        out.curl[2 * k + 1] = c;
    }
    return out;
}

std::vector<double> P1Space::interpolate(const std::function<double(Vec2)>& fn) const
{
    std::vector<double> out(dof_count());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(mesh_->vertex(static_cast<int>(i)));
    return out;
}

double P1Space::evaluate(std::span<const double> coeffs, int t, const Barycentric& b) const
{
    const auto& tri = mesh_->triangle(t);
    return b[0] * coeffs[tri[0]] + b[1] * coeffs[tri[1]] + b[2] * coeffs[tri[2]];
}

std::array<int, 6> NedelecSpace::dofs(int t) const
{
    std::array<int, 6> d{};
    const auto& te = mesh_->triangle_edges(t);
    for (int k = 0; k < 3; ++k) {
        d[2 * k] = 2 * te[k].index;
        d[2 * k + 1] = 2 * te[k].index + 1;
    }
    return d;
}

std::vector<double> NedelecSpace::interpolate(const std::function<Vec2(Vec2)>& fn,
                                              int edge_points) const
{
    const LineRule line = gauss_legendre(edge_points);
    std::vector<double> out(dof_count(), 0.0);
    for (std::size_t e = 0; e < mesh_->num_edges(); ++e) {
        const auto& ed = mesh_->edge(static_cast<int>(e));
        const Vec2 a = mesh_->vertex(ed[0]);
        const Vec2 d = mesh_->vertex(ed[1]) - a;
        const double len = std::sqrt(dot(d, d));
        const Vec2 tangent = (1.0 / len) * d;
        double m_lo = 0.0, m_hi = 0.0;
        for (std::size_t q = 0; q < line.size(); ++q) {
            const double s = line.points[q];
            const double ut = dot(fn(a + s * d), tangent);
            m_lo += line.weights[q] * ut * (1.0 - s);
            m_hi += line.weights[q] * ut * s;
        }
        out[2 * e] = len * m_lo;
        out[2 * e + 1] = len * m_hi;
    }
    return out;
}

Vec2 NedelecSpace::evaluate(std::span<const double> coeffs, int t, const Barycentric& b) const
{
    const auto geom = make_element_geometry(*mesh_, t);
    const auto vals = eval_nedelec(geom, mesh_->triangle_edges(t), b);
    const auto d = dofs(t);
    Vec2 u;
    for (int j = 0; j < 6; ++j) u += coeffs[d[j]] * vals.value[j];
    return u;
}

double NedelecSpace::evaluate_curl(std::span<const double> coeffs, int t) const
{
    const auto geom = make_element_geometry(*mesh_, t);
    const auto vals = eval_nedelec(geom, mesh_->triangle_edges(t), {1.0 / 3, 1.0 / 3, 1.0 / 3});
    const auto d = dofs(t);
    double c = 0.0;
    for (int j = 0; j < 6; ++j) c += coeffs[d[j]] * vals.curl[j];
    return c;
}

}  // namespace tdgl
