#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ksplit/geom.hpp"

namespace ksplit {

struct Triangle {
  int a, b, c;
  int operator[](int i) const { return i == 0 ? a : (i == 1 ? b : c); }
};

// Triangulated closed orientable surface embedded in 3-space. Triangles are
// oriented counter-clockwise seen from outside (outward normals).
struct SurfaceMesh {
  std::vector<Point3> vertices;
  std::vector<Triangle> triangles;
};

// V - E + F of the triangulation. Requires every edge to bound exactly two
// triangles (throws GeometryError otherwise).
int euler_characteristic(const SurfaceMesh& mesh);

// (2 - chi) / 2; throws GeometryError when 2 - chi is odd (not a closed
// orientable surface).
int genus(const SurfaceMesh& mesh);

struct MeshReport {
  int euler = 0;
  int genus = 0;
  double min_clearance = 0.0;     // smallest gap between non-adjacent triangles
  double signed_volume = 0.0;     // positive when orientation is outward
};

// Full invariant suite: closed (edge-manifold, every edge in two triangles),
// consistently oriented, globally embedded (no two non-adjacent triangles
// within tol_geom), integer genus, outward orientation. Throws GeometryError
// naming the first violated property.
MeshReport validate_surface_mesh(const SurfaceMesh& mesh);

// As above but without the O(n log n) embeddedness sweep; used by interior
// steps that re-validate fully at the end.
MeshReport validate_surface_mesh_fast(const SurfaceMesh& mesh);

// Closed walk through mesh vertices along mesh edges.
using EdgePath = std::vector<int>;

// Number of connected components of the surface after cutting along the
// closed edge path, computed on the triangle adjacency graph with the path
// edges removed. The path must be a simple closed walk along mesh edges.
int components_after_cut(const SurfaceMesh& mesh, const EdgePath& path);

// Triangle sets of those components (same order as counted).
std::vector<std::vector<int>> cut_components(const SurfaceMesh& mesh, const EdgePath& path);

// V - E + F of a triangle subset, counting boundary vertices and edges.
int euler_characteristic_of_subset(const SurfaceMesh& mesh, const std::vector<int>& tri_ids);

// Wavefront OBJ with counter-clockwise (outward) faces.
std::string to_obj(const SurfaceMesh& mesh);

}  // namespace ksplit
