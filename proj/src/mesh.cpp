#include "ksplit/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "ksplit/errors.hpp"

namespace ksplit {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// undirected edge -> number of incident triangles
std::unordered_map<std::uint64_t, int> edge_counts(const SurfaceMesh& mesh) {
  std::unordered_map<std::uint64_t, int> counts;
  counts.reserve(mesh.triangles.size() * 2);
  for (const auto& t : mesh.triangles) {
    counts[edge_key(t.a, t.b)]++;
    counts[edge_key(t.b, t.c)]++;
    counts[edge_key(t.c, t.a)]++;
  }
  return counts;
}

void require_closed(const std::unordered_map<std::uint64_t, int>& counts) {
  for (const auto& [key, n] : counts) {
    if (n != 2) {
      int a = static_cast<int>(key >> 32), b = static_cast<int>(key & 0xffffffffu);
      throw GeometryError("mesh is not closed: edge (" + std::to_string(a) + "," +
                          std::to_string(b) + ") bounds " + std::to_string(n) + " triangles");
    }
  }
}

struct Grid {
  double cell;
  Vec3 origin;
  std::unordered_map<std::uint64_t, std::vector<int>> cells;

  std::uint64_t key(int ix, int iy, int iz) const {
    auto h = [](int v) { return static_cast<std::uint64_t>(static_cast<std::uint32_t>(v + (1 << 20))); };
    return (h(ix) << 42) ^ (h(iy) << 21) ^ h(iz);
  }
};

}  // namespace

namespace {

// Vertices referenced by at least one triangle. Construction can leave
// helper vertices behind (e.g. grid points interior to a removed patch);
// they are not part of the complex and do not count toward chi.
int used_vertex_count(const SurfaceMesh& mesh) {
  std::vector<char> used(mesh.vertices.size(), 0);
  for (const auto& t : mesh.triangles) used[t.a] = used[t.b] = used[t.c] = 1;
  int n = 0;
  for (char u : used) n += u;
  return n;
}

}  // namespace

int euler_characteristic(const SurfaceMesh& mesh) {
  auto counts = edge_counts(mesh);
  require_closed(counts);
  int v = used_vertex_count(mesh);
  int e = static_cast<int>(counts.size());
  int f = static_cast<int>(mesh.triangles.size());
  return v - e + f;
}

int genus(const SurfaceMesh& mesh) {
  int chi = euler_characteristic(mesh);
  if ((2 - chi) % 2 != 0) {
    throw GeometryError("2 - chi = " + std::to_string(2 - chi) + " is odd; not a closed surface");
  }
  int g = (2 - chi) / 2;
  if (g < 0) throw GeometryError("negative genus; mesh is not connected or not a surface");
  return g;
}

namespace {

MeshReport validate_impl(const SurfaceMesh& mesh, bool check_embedded) {
  if (mesh.vertices.size() < 4 || mesh.triangles.size() < 4) {
    throw GeometryError("mesh too small to be a closed surface");
  }
  const int nv = static_cast<int>(mesh.vertices.size());
  for (const auto& p : mesh.vertices) {
    if (!all_finite(p)) throw GeometryError("mesh vertex has non-finite coordinate");
  }
  for (const auto& t : mesh.triangles) {
    if (t.a < 0 || t.b < 0 || t.c < 0 || t.a >= nv || t.b >= nv || t.c >= nv) {
      throw GeometryError("triangle vertex index out of range");
    }
    if (t.a == t.b || t.b == t.c || t.c == t.a) throw GeometryError("degenerate triangle");
    double area2 = norm(cross(mesh.vertices[t.b] - mesh.vertices[t.a],
                              mesh.vertices[t.c] - mesh.vertices[t.a]));
    if (area2 <= tol_geom * tol_geom) throw GeometryError("zero-area triangle");
  }

  // Closed and consistently oriented: every undirected edge twice, every
  // directed edge once.
  auto counts = edge_counts(mesh);
  require_closed(counts);
  {
    std::unordered_set<std::uint64_t> directed;
    directed.reserve(mesh.triangles.size() * 3);
    auto dkey = [](int a, int b) {
      return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
             static_cast<std::uint32_t>(b);
    };
    for (const auto& t : mesh.triangles) {
      for (auto [a, b] : {std::pair{t.a, t.b}, {t.b, t.c}, {t.c, t.a}}) {
        if (!directed.insert(dkey(a, b)).second) {
          throw GeometryError("orientation inconsistency at edge (" + std::to_string(a) + "," +
                              std::to_string(b) + ")");
        }
      }
    }
  }

  // Connected.
  {
    std::unordered_map<std::uint64_t, std::vector<int>> edge_tris;
    for (int i = 0; i < static_cast<int>(mesh.triangles.size()); ++i) {
      const auto& t = mesh.triangles[i];
      edge_tris[edge_key(t.a, t.b)].push_back(i);
      edge_tris[edge_key(t.b, t.c)].push_back(i);
      edge_tris[edge_key(t.c, t.a)].push_back(i);
    }
    std::vector<char> seen(mesh.triangles.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    size_t visited = 1;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      const auto& t = mesh.triangles[cur];
      for (auto [a, b] : {std::pair{t.a, t.b}, {t.b, t.c}, {t.c, t.a}}) {
        for (int other : edge_tris[edge_key(a, b)]) {
          if (!seen[other]) {
            seen[other] = 1;
            ++visited;
            stack.push_back(other);
          }
        }
      }
    }
    if (visited != mesh.triangles.size()) throw GeometryError("mesh is not connected");
  }

  MeshReport report;
  report.euler = used_vertex_count(mesh) - static_cast<int>(counts.size()) +
                 static_cast<int>(mesh.triangles.size());
  if ((2 - report.euler) % 2 != 0) throw GeometryError("odd 2 - chi; not a surface");
  report.genus = (2 - report.euler) / 2;
  if (report.genus < 0) throw GeometryError("negative genus");

  for (const auto& t : mesh.triangles) {
    report.signed_volume += det3(mesh.vertices[t.a], mesh.vertices[t.b], mesh.vertices[t.c]) / 6.0;
  }
  if (report.signed_volume <= 0.0) {
    throw GeometryError("orientation is inward (signed volume " +
                        std::to_string(report.signed_volume) + ")");
  }

  report.min_clearance = std::numeric_limits<double>::infinity();
  if (check_embedded) {
    // Uniform grid over triangle bounding boxes; only nearby non-adjacent
    // pairs get the exact distance test.
    const int nt = static_cast<int>(mesh.triangles.size());
    Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
    double max_extent = 0.0;
    std::vector<std::array<Vec3, 2>> boxes(nt);
    for (int i = 0; i < nt; ++i) {
      const auto& t = mesh.triangles[i];
      Vec3 blo = mesh.vertices[t.a], bhi = mesh.vertices[t.a];
      for (int k : {t.b, t.c}) {
        const auto& p = mesh.vertices[k];
        blo = {std::min(blo.x, p.x), std::min(blo.y, p.y), std::min(blo.z, p.z)};
        bhi = {std::max(bhi.x, p.x), std::max(bhi.y, p.y), std::max(bhi.z, p.z)};
      }
      boxes[i] = {blo, bhi};
      lo = {std::min(lo.x, blo.x), std::min(lo.y, blo.y), std::min(lo.z, blo.z)};
      hi = {std::max(hi.x, bhi.x), std::max(hi.y, bhi.y), std::max(hi.z, bhi.z)};
      max_extent = std::max({max_extent, bhi.x - blo.x, bhi.y - blo.y, bhi.z - blo.z});
    }
    Grid grid;
    grid.cell = std::max(max_extent, 1e-12);
    grid.origin = lo;
    auto cell_of = [&](const Vec3& p) {
      return std::array<int, 3>{static_cast<int>(std::floor((p.x - lo.x) / grid.cell)),
                                static_cast<int>(std::floor((p.y - lo.y) / grid.cell)),
                                static_cast<int>(std::floor((p.z - lo.z) / grid.cell))};
    };
    for (int i = 0; i < nt; ++i) {
      auto clo = cell_of(boxes[i][0]), chi = cell_of(boxes[i][1]);
      for (int x = clo[0]; x <= chi[0]; ++x)
        for (int y = clo[1]; y <= chi[1]; ++y)
          for (int z = clo[2]; z <= chi[2]; ++z) grid.cells[grid.key(x, y, z)].push_back(i);
    }
    auto share_vertex = [&](int i, int j) {
      const auto& ti = mesh.triangles[i];
      const auto& tj = mesh.triangles[j];
      for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v)
          if (ti[u] == tj[v]) return true;
      return false;
    };
    std::unordered_set<std::uint64_t> tested;
    for (int i = 0; i < nt; ++i) {
      auto clo = cell_of(boxes[i][0]), chi = cell_of(boxes[i][1]);
      for (int x = clo[0] - 1; x <= chi[0] + 1; ++x) {
        for (int y = clo[1] - 1; y <= chi[1] + 1; ++y) {
          for (int z = clo[2] - 1; z <= chi[2] + 1; ++z) {
            auto it = grid.cells.find(grid.key(x, y, z));
            if (it == grid.cells.end()) continue;
            for (int j : it->second) {
              if (j <= i || share_vertex(i, j)) continue;
              if (!tested.insert(edge_key(i, j)).second) continue;
              const auto& ti = mesh.triangles[i];
              const auto& tj = mesh.triangles[j];
              double d = triangle_triangle_distance(
                  {mesh.vertices[ti.a], mesh.vertices[ti.b], mesh.vertices[ti.c]},
                  {mesh.vertices[tj.a], mesh.vertices[tj.b], mesh.vertices[tj.c]});
              if (d <= tol_geom) {
                throw GeometryError("mesh not embedded: triangles " + std::to_string(i) + " and " +
                                    std::to_string(j) + " are " + std::to_string(d) + " apart");
              }
              report.min_clearance = std::min(report.min_clearance, d);
            }
          }
        }
      }
    }
  }
  return report;
}

}  // namespace

MeshReport validate_surface_mesh(const SurfaceMesh& mesh) { return validate_impl(mesh, true); }

MeshReport validate_surface_mesh_fast(const SurfaceMesh& mesh) {
  return validate_impl(mesh, false);
}

namespace {

void require_edge_path(const SurfaceMesh& mesh, const EdgePath& path,
                       const std::unordered_map<std::uint64_t, int>& counts) {
  if (path.size() < 3) throw InputError("edge path needs at least 3 vertices");
  std::unordered_set<int> seen;
  for (int v : path) {
    if (v < 0 || v >= static_cast<int>(mesh.vertices.size())) {
      throw InputError("edge path vertex out of range");
    }
    if (!seen.insert(v).second) throw InputError("edge path revisits vertex " + std::to_string(v));
  }
  for (size_t i = 0; i < path.size(); ++i) {
    int a = path[i], b = path[(i + 1) % path.size()];
    if (counts.find(edge_key(a, b)) == counts.end()) {
      throw InputError("edge path step (" + std::to_string(a) + "," + std::to_string(b) +
                       ") is not a mesh edge");
    }
  }
}

}  // namespace

std::vector<std::vector<int>> cut_components(const SurfaceMesh& mesh, const EdgePath& path) {
  auto counts = edge_counts(mesh);
  require_closed(counts);
  require_edge_path(mesh, path, counts);

  std::unordered_set<std::uint64_t> cut_edges;
  for (size_t i = 0; i < path.size(); ++i) {
    cut_edges.insert(edge_key(path[i], path[(i + 1) % path.size()]));
  }

  std::unordered_map<std::uint64_t, std::vector<int>> edge_tris;
  for (int i = 0; i < static_cast<int>(mesh.triangles.size()); ++i) {
    const auto& t = mesh.triangles[i];
    edge_tris[edge_key(t.a, t.b)].push_back(i);
    edge_tris[edge_key(t.b, t.c)].push_back(i);
    edge_tris[edge_key(t.c, t.a)].push_back(i);
  }

  std::vector<int> label(mesh.triangles.size(), -1);
  std::vector<std::vector<int>> components;
  for (int start = 0; start < static_cast<int>(mesh.triangles.size()); ++start) {
    if (label[start] >= 0) continue;
    int id = static_cast<int>(components.size());
    components.emplace_back();
    std::vector<int> stack{start};
    label[start] = id;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      components[id].push_back(cur);
      const auto& t = mesh.triangles[cur];
      for (auto [a, b] : {std::pair{t.a, t.b}, {t.b, t.c}, {t.c, t.a}}) {
        std::uint64_t key = edge_key(a, b);
        if (cut_edges.count(key)) continue;  // do not walk across the curve
        for (int other : edge_tris[key]) {
          if (label[other] < 0) {
            label[other] = id;
            stack.push_back(other);
          }
        }
      }
    }
  }
  return components;
}

int components_after_cut(const SurfaceMesh& mesh, const EdgePath& path) {
  return static_cast<int>(cut_components(mesh, path).size());
}

int euler_characteristic_of_subset(const SurfaceMesh& mesh, const std::vector<int>& tri_ids) {
  std::unordered_set<std::uint64_t> edges;
  std::unordered_set<int> verts;
  for (int id : tri_ids) {
    const auto& t = mesh.triangles[id];
    verts.insert(t.a);
    verts.insert(t.b);
    verts.insert(t.c);
    edges.insert(edge_key(t.a, t.b));
    edges.insert(edge_key(t.b, t.c));
    edges.insert(edge_key(t.c, t.a));
  }
  return static_cast<int>(verts.size()) - static_cast<int>(edges.size()) +
         static_cast<int>(tri_ids.size());
}

std::string to_obj(const SurfaceMesh& mesh) {
  std::string out;
  out.reserve(mesh.vertices.size() * 40 + mesh.triangles.size() * 20);
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
    out += buf;
  }
  for (const auto& t : mesh.triangles) {
    std::snprintf(buf, sizeof(buf), "f %d %d %d\n", t.a + 1, t.b + 1, t.c + 1);
    out += buf;
  }
  return out;
}

}  // namespace ksplit
