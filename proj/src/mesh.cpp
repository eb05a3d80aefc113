#include "mesh.hpp"

#include <cassert>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace stns {

namespace {

constexpr double kTagTol = 1e-12;

Boundary classify(double x, double y) {
  const bool on_lid = std::abs(y - 1.0) <= kTagTol && x > 0.0 && x < 1.0;
  return on_lid ? Boundary::Lid : Boundary::Wall;
}

}  // namespace

std::array<double, 2> Mesh::edge_midpoint(int e) const {
  const auto& [a, b] = edges[e];
  return {0.5 * (vertices[a].x + vertices[b].x), 0.5 * (vertices[a].y + vertices[b].y)};
}

double Mesh::signed_area(int t) const {
  const auto& tri = triangles[t];
  const Vertex& p0 = vertices[tri[0]];
  const Vertex& p1 = vertices[tri[1]];
  const Vertex& p2 = vertices[tri[2]];
  return 0.5 * ((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y));
}

Mesh build_unit_square_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_unit_square_mesh: n must be >= 1");

  Mesh mesh;
  const int np = n + 1;
  mesh.vertices.reserve(static_cast<std::size_t>(np) * np);
  for (int j = 0; j < np; ++j)
    for (int i = 0; i < np; ++i)
      mesh.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});

  auto vid = [np](int i, int j) { return j * np + i; };

  mesh.triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j);
      const int v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1);
      const int v11 = vid(i + 1, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }

  // Deduplicated edge list in first-encounter order; edge i of a triangle is
  // the one opposite local vertex i.
  std::map<std::array<int, 2>, int> edge_index;
  std::vector<int> incident_triangles;
  mesh.triangle_edges.resize(mesh.triangles.size());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      int a = tri[(i + 1) % 3];
      int b = tri[(i + 2) % 3];
      if (a > b) std::swap(a, b);
      const std::array<int, 2> key{a, b};
      auto [it, inserted] = edge_index.try_emplace(key, mesh.edge_count());
      if (inserted) {
        mesh.edges.push_back(key);
        incident_triangles.push_back(0);
      }
      mesh.triangle_edges[t][i] = it->second;
      ++incident_triangles[it->second];
    }
  }

  mesh.vertex_boundary.assign(mesh.vertices.size(), Boundary::Interior);
  mesh.edge_boundary.assign(mesh.edges.size(), Boundary::Interior);
  for (int e = 0; e < mesh.edge_count(); ++e) {
    assert(incident_triangles[e] == 1 || incident_triangles[e] == 2);
    if (incident_triangles[e] != 1) continue;
    const auto [mx, my] = mesh.edge_midpoint(e);
    mesh.edge_boundary[e] = classify(mx, my);
    for (int v : mesh.edges[e]) {
      const Vertex& p = mesh.vertices[v];
      mesh.vertex_boundary[v] = classify(p.x, p.y);
    }
  }
  return mesh;
}

double mesh_size(const Mesh& mesh) {
  double h = 0.0;
  for (const auto& [a, b] : mesh.edges) {
    const double dx = mesh.vertices[a].x - mesh.vertices[b].x;
    const double dy = mesh.vertices[a].y - mesh.vertices[b].y;
    h = std::max(h, std::hypot(dx, dy));
  }
  return h;
}

void write_mesh_vtk(const Mesh& mesh, std::ostream& out) {
  out << "# vtk DataFile Version 3.0\n"
      << "triangulated unit square\n"
      << "ASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertex_count() << " double\n";
  for (const Vertex& v : mesh.vertices) out << v.x << " " << v.y << " 0\n";
  out << "CELLS " << mesh.triangle_count() << " " << 4 * mesh.triangle_count() << "\n";
  for (const auto& tri : mesh.triangles) out << "3 " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
  out << "CELL_TYPES " << mesh.triangle_count() << "\n";
  for (int t = 0; t < mesh.triangle_count(); ++t) out << "5\n";
}

}  // namespace stns
