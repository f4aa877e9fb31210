#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "tdgl/mesh.hpp"
#include "tdgl/quadrature.hpp"

namespace tdgl {

using Barycentric = std::array<double, 3>;

/// Affine data of one triangle: vertices, area and the (constant)
/// gradients of its barycentric coordinates.
struct ElementGeometry {
    std::array<Vec2, 3> vertex;
    std::array<Vec2, 3> grad_lambda;
    double area = 0.0;

    Vec2 map(const Barycentric& b) const
    {
        return b[0] * vertex[0] + b[1] * vertex[1] + b[2] * vertex[2];
    }
};

/// Throws std::invalid_argument for a zero-area triangle.
ElementGeometry make_element_geometry(const Mesh& mesh, int t);

struct P1Values {
    std::array<double, 3> value;
    std::array<Vec2, 3> grad;
};

struct NedelecValues {
    std::array<Vec2, 6> value;
    std::array<double, 6> curl;
};

P1Values eval_p1(const ElementGeometry& geom, const Barycentric& b);

/// Local Nédélec (second kind, lowest order) basis. Local function 2k+s
/// belongs to local edge k (vertices k, k+1) and is dual to the moment
/// ∫_e (u·t_e) λ q ds, where q is the edge's low (s = 0) or high (s = 1)
/// global endpoint and t_e the unit tangent from low to high.
NedelecValues eval_nedelec(const ElementGeometry& geom, const std::array<EdgeRef, 3>& edges,
                           const Barycentric& b);

/// Conforming P1 space over a mesh. The mesh must outlive the space.
class P1Space {
public:
    explicit P1Space(const Mesh& mesh) : mesh_(&mesh) {}

    const Mesh& mesh() const { return *mesh_; }
    std::size_t dof_count() const { return mesh_->num_vertices(); }
    std::array<int, 3> dofs(int t) const { return mesh_->triangle(t); }

    /// Nodal interpolation.
    std::vector<double> interpolate(const std::function<double(Vec2)>& fn) const;

    double evaluate(std::span<const double> coeffs, int t, const Barycentric& b) const;

private:
    const Mesh* mesh_;
};

/// H(curl)-conforming space with two tangential moments per edge.
/// Global DOF 2e is the moment against the edge's low-vertex hat function,
/// 2e+1 against the high-vertex one. The mesh must outlive the space.
class NedelecSpace {
public:
    explicit NedelecSpace(const Mesh& mesh) : mesh_(&mesh) {}

    const Mesh& mesh() const { return *mesh_; }
    std::size_t dof_count() const { return 2 * mesh_->num_edges(); }
    std::array<int, 6> dofs(int t) const;

    /// Applies the DOF functionals with an n-point Gauss rule per edge
    /// (n = 2 is exact for linear fields).
    std::vector<double> interpolate(const std::function<Vec2(Vec2)>& fn, int edge_points = 3) const;

    Vec2 evaluate(std::span<const double> coeffs, int t, const Barycentric& b) const;
    double evaluate_curl(std::span<const double> coeffs, int t) const;

private:
    const Mesh* mesh_;
};

}  // namespace tdgl
