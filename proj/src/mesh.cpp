#include "tdgl/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace tdgl {

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles))
{
    const int nv = static_cast<int>(vertices_.size());
    std::map<std::pair<int, int>, int> edge_lookup;
    tri_edges_.resize(triangles_.size());

    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const auto& tri = triangles_[t];
        for (int v : tri) {
            if (v < 0 || v >= nv) {
                throw std::invalid_argument("triangle " + std::to_string(t) +
                                            " references a missing vertex");
            }
        }
        if (triangle_area(static_cast<int>(t)) <= 0.0) {
            throw std::invalid_argument("triangle " + std::to_string(t) +
                                        " is degenerate or clockwise");
        }
        for (int k = 0; k < 3; ++k) {
            const int a = tri[k];
            const int b = tri[(k + 1) % 3];
            const auto key = std::minmax(a, b);
            auto [it, inserted] =
                edge_lookup.try_emplace({key.first, key.second}, static_cast<int>(edges_.size()));
            if (inserted) {
                edges_.push_back({key.first, key.second});
                edge_valence_.push_back(0);
            }
            const int e = it->second;
            if (++edge_valence_[e] > 2) {
                throw std::invalid_argument("edge (" + std::to_string(key.first) + ", " +
                                            std::to_string(key.second) +
                                            ") is shared by more than two triangles");
            }
            tri_edges_[t][k] = EdgeRef{e, a < b ? 1 : -1};
        }
    }

    boundary_edge_.resize(edges_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        boundary_edge_[e] = edge_valence_[e] == 1 ? 1 : 0;
    }

    // Two triangles on one edge must traverse it in opposite directions,
    // otherwise one of them is flipped or the surface is not orientable.
    std::vector<int> sign_sum(edges_.size(), 0);
    for (const auto& refs : tri_edges_) {
        for (const auto& r : refs) sign_sum[r.index] += r.sign;
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (edge_valence_[e] == 2 && sign_sum[e] != 0) {
            throw std::invalid_argument("inconsistent orientation across edge " + std::to_string(e));
        }
    }
}

double Mesh::triangle_area(int t) const
{
    const auto& tri = triangles_[t];
    const Vec2& p0 = vertices_[tri[0]];
    return 0.5 * cross(vertices_[tri[1]] - p0, vertices_[tri[2]] - p0);
}

double Mesh::total_area() const
{
    double sum = 0.0;
    for (std::size_t t = 0; t < triangles_.size(); ++t) sum += triangle_area(static_cast<int>(t));
    return sum;
}

double Mesh::max_edge_length() const
{
    double h = 0.0;
    for (const auto& e : edges_) {
        const Vec2 d = vertices_[e[1]] - vertices_[e[0]];
        h = std::max(h, std::sqrt(dot(d, d)));
    }
    return h;
}

std::vector<bool> Mesh::boundary_vertices() const
{
    std::vector<bool> flag(vertices_.size(), false);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (boundary_edge_[e]) {
            flag[edges_[e][0]] = true;
            flag[edges_[e][1]] = true;
        }
    }
    return flag;
}

Mesh build_tensor_mesh(std::span<const double> xs, std::span<const double> ys,
                       const std::function<bool(int, int)>& keep_cell)
{
    const int nx = static_cast<int>(xs.size()) - 1;
    const int ny = static_cast<int>(ys.size()) - 1;
    if (nx < 1 || ny < 1) throw std::invalid_argument("tensor grid needs at least one cell");

    std::vector<int> id((nx + 1) * (ny + 1), -1);
    std::vector<Vec2> vertices;
    auto vertex = [&](int i, int j) {
        int& slot = id[j * (nx + 1) + i];
        if (slot < 0) {
            slot = static_cast<int>(vertices.size());
            vertices.push_back({xs[i], ys[j]});
        }
        return slot;
    };

    std::vector<std::array<int, 3>> triangles;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            if (!keep_cell(i, j)) continue;
            const int v00 = vertex(i, j);
            const int v10 = vertex(i + 1, j);
            const int v11 = vertex(i + 1, j + 1);
            const int v01 = vertex(i, j + 1);
            triangles.push_back({v00, v10, v11});
            triangles.push_back({v00, v11, v01});
        }
    }
    return Mesh(std::move(vertices), std::move(triangles));
}

namespace {

std::vector<double> uniform_grid(double a, double b, int n)
{
    std::vector<double> g(n + 1);
    for (int i = 0; i <= n; ++i) g[i] = a + (b - a) * i / n;
    g[n] = b;
    return g;
}

}  // namespace

Mesh build_unit_square_mesh(int M)
{
    if (M < 1) throw std::invalid_argument("unit square mesh needs M >= 1");
    const auto g = uniform_grid(0.0, 1.0, M);
    return build_tensor_mesh(g, g, [](int, int) { return true; });
}

Mesh build_lshape_mesh(int M)
{
    if (M < 2 || M % 2 != 0) {
        throw std::invalid_argument("L-shape mesh needs an even M >= 2 to resolve the corner");
    }
    const auto g = uniform_grid(0.0, 1.0, M);
    const int half = M / 2;
    return build_tensor_mesh(g, g, [half](int i, int j) { return !(i >= half && j < half); });
}

Mesh build_square_with_holes_mesh(double h_target)
{
    if (!(h_target > 0.0)) throw std::invalid_argument("h_target must be positive");
    if (h_target > 1.0) throw std::invalid_argument("h_target exceeds the hole size 1");

    const std::array<double, 6> breaks{0.0, 2.0, 3.0, 7.0, 8.0, 10.0};
    std::vector<double> g{0.0};
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
        const double len = breaks[s + 1] - breaks[s];
        const int n = std::max(1, static_cast<int>(std::lround(len / h_target)));
        for (int i = 1; i <= n; ++i) g.push_back(i == n ? breaks[s + 1] : breaks[s] + len * i / n);
    }

    auto in_hole = [](double c) { return (c > 2.0 && c < 3.0) || (c > 7.0 && c < 8.0); };
    return build_tensor_mesh(g, g, [&](int i, int j) {
        const double cx = 0.5 * (g[i] + g[i + 1]);
        const double cy = 0.5 * (g[j] + g[j + 1]);
        return !(in_hole(cx) && in_hole(cy));
    });
}

Mesh uniform_refine(const Mesh& mesh)
{
    const int nv = static_cast<int>(mesh.num_vertices());
    std::vector<Vec2> vertices(mesh.vertices().begin(), mesh.vertices().end());
    vertices.reserve(nv + mesh.num_edges());
    for (const auto& e : mesh.edges()) {
        vertices.push_back(0.5 * (mesh.vertex(e[0]) + mesh.vertex(e[1])));
    }

    std::vector<std::array<int, 3>> triangles;
    triangles.reserve(4 * mesh.num_triangles());
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const auto& v = mesh.triangle(static_cast<int>(t));
        const auto& te = mesh.triangle_edges(static_cast<int>(t));
        const int m01 = nv + te[0].index;
        const int m12 = nv + te[1].index;
        const int m20 = nv + te[2].index;
        triangles.push_back({v[0], m01, m20});
        triangles.push_back({m01, v[1], m12});
        triangles.push_back({m20, m12, v[2]});
        triangles.push_back({m01, m12, m20});
    }
    return Mesh(std::move(vertices), std::move(triangles));
}

}  // namespace tdgl
