#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tdgl {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
inline Vec2 operator*(double s, Vec2 a) { return a *= s; }
inline Vec2 operator*(Vec2 a, double s) { return a *= s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3D cross product.
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

/// An edge referenced from a triangle: global index plus orientation.
/// `sign` is +1 when the triangle's local direction (local vertex k to
/// k+1) runs from the edge's low to its high global vertex index.
struct EdgeRef {
    int index = -1;
    int sign = 0;
};

/// Conforming triangle mesh with globally oriented edges.
///
/// Triangles are stored counter-clockwise. Edge `e` joins `edges[e][0] <
/// edges[e][1]`; that low-to-high direction is the global tangent used by
/// every tangential degree of freedom. Local edge k of a triangle joins its
/// local vertices k and (k+1) % 3.
class Mesh {
public:
    Mesh() = default;

    /// Builds edge connectivity and validates orientation and conformity.
    /// Throws std::invalid_argument on degenerate, clockwise or
    /// non-manifold input.
    Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles);

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_triangles() const { return triangles_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    std::span<const Vec2> vertices() const { return vertices_; }
    std::span<const std::array<int, 3>> triangles() const { return triangles_; }
    std::span<const std::array<int, 2>> edges() const { return edges_; }
    std::span<const std::array<EdgeRef, 3>> tri_edges() const { return tri_edges_; }

    const Vec2& vertex(int i) const { return vertices_[i]; }
    const std::array<int, 3>& triangle(int t) const { return triangles_[t]; }
    const std::array<int, 2>& edge(int e) const { return edges_[e]; }
    const std::array<EdgeRef, 3>& triangle_edges(int t) const { return tri_edges_[t]; }
    bool is_boundary_edge(int e) const { return boundary_edge_[e] != 0; }
    /// Number of triangles sharing edge e (1 on the boundary, 2 inside).
    int edge_valence(int e) const { return edge_valence_[e]; }

    double triangle_area(int t) const;
    double total_area() const;
    double max_edge_length() const;
    std::vector<bool> boundary_vertices() const;

private:
    std::vector<Vec2> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<std::array<int, 2>> edges_;
    std::vector<std::array<EdgeRef, 3>> tri_edges_;
    std::vector<char> boundary_edge_;
    std::vector<int> edge_valence_;
};

/// Structured mesh over the tensor grid xs × ys. Each retained cell is split
/// along its south-west to north-east diagonal. `keep_cell(i, j)` selects the
/// cell [xs[i], xs[i+1]] × [ys[j], ys[j+1]]; unused grid vertices are dropped.
Mesh build_tensor_mesh(std::span<const double> xs, std::span<const double> ys,
                       const std::function<bool(int, int)>& keep_cell);

/// Unit square cut into M×M squares, each split by its north-east diagonal.
Mesh build_unit_square_mesh(int M);

/// (0,1)² minus [0.5,1]×[0,0.5], with M cells per unit length (M even).
Mesh build_lshape_mesh(int M);

/// (0,10)² minus the unit holes with lower-left corners (2,2), (2,7), (7,2),
/// (7,7). Grid lines fall on every hole side; each interval between them is
/// divided into round(length / h_target) cells.
Mesh build_square_with_holes_mesh(double h_target);

/// Red refinement: every triangle split into four via edge midpoints.
Mesh uniform_refine(const Mesh& mesh);

}  // namespace tdgl
