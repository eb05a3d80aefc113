#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace stns {

/// Boundary classification of a mesh entity. The moving lid is the open top
/// edge of the unit square; the two top corners belong to the walls so the
/// cavity is non-leaky.
enum class Boundary : std::uint8_t { Interior, Wall, Lid };

struct Vertex {
  double x;
  double y;
};

/// Conforming triangulation of the unit square. Immutable after construction;
/// safe to share read-only across threads.
struct Mesh {
  std::vector<Vertex> vertices;
  std::vector<std::array<int, 3>> triangles;  // CCW vertex indices
  std::vector<std::array<int, 2>> edges;      // sorted vertex pairs, deduplicated
  // triangle_edges[t][i] is the edge opposite local vertex i of triangle t.
  std::vector<std::array<int, 3>> triangle_edges;
  std::vector<Boundary> vertex_boundary;  // one entry per vertex
  std::vector<Boundary> edge_boundary;    // one entry per edge

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }

  std::array<double, 2> edge_midpoint(int e) const;
  double signed_area(int t) const;
};

/// Uniform triangulation with n subdivisions per side; every lattice cell is
/// split along the bottom-left to top-right diagonal.
Mesh build_unit_square_mesh(int n);

/// Maximum edge length.
double mesh_size(const Mesh& mesh);

/// Legacy-VTK (ASCII) unstructured-grid export of the triangulation.
void write_mesh_vtk(const Mesh& mesh, std::ostream& out);

}  // namespace stns
