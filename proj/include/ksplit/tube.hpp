#pragma once

#include <set>
#include <utility>
#include <vector>

#include "ksplit/curve.hpp"
#include "ksplit/mesh.hpp"

namespace ksplit {

// Piecewise-linear (s, theta) parameterization of one tube of a swept
// surface. s in [0,1) runs along the core (wrapping when the core is
// closed), theta in [0, 2*pi) runs around it; theta increases from the
// transported normal u toward u x t, so that a +1 meridian wrap adds +1 to
// the linking number with the core. Chart points are evaluated by barycentric
// interpolation over the actual mesh triangles of the grid, so they lie on
// the mesh exactly. Cells listed in `excluded` were removed for junction
// welds or stabilization handles; curves may not enter them.
struct TubeChart {
  int id = 0;
  bool closed = true;
  double radius = 0.0;
  double core_length = 0.0;
  int n_long = 0;  // cells along the core; rings() = n_long (closed) or n_long + 1
  int n_circ = 0;  // cells around the core
  double frame_holonomy = 0.0;  // closing frame mismatch, distributed over segments
  std::vector<int> grid;        // mesh vertex ids, ring-major: grid[ring * n_circ + j]
  std::set<std::pair<int, int>> excluded;

  int rings() const { return closed ? n_long : n_long + 1; }
  int vertex_id(int ring, int j) const {
    int r = closed ? ((ring % n_long) + n_long) % n_long : ring;
    int c = ((j % n_circ) + n_circ) % n_circ;
    return grid[static_cast<size_t>(r) * n_circ + c];
  }
  bool cell_excluded(int ring, int j) const {
    int r = closed ? ((ring % n_long) + n_long) % n_long : ring;
    int c = ((j % n_circ) + n_circ) % n_circ;
    return excluded.count({r, c}) > 0;
  }
};

// Point of the chart at (s, theta); lies exactly on the mesh.
Point3 chart_point(const SurfaceMesh& mesh, const TubeChart& chart, double s, double theta);

// Cell indices containing chart parameter (s, theta).
std::pair<int, int> chart_cell(const TubeChart& chart, double s, double theta);

// Local chart metric at s: (length per unit s, length per unit theta).
std::pair<double, double> chart_scale(const TubeChart& chart);

struct TubeSurface {
  SurfaceMesh mesh;
  std::vector<TubeChart> charts;  // circles of the graph first, then arcs
};

// Boundary of a regular neighborhood of the graph: one swept tube per circle
// and per arc, with arc tubes welded into side openings of their host circle
// tubes. Arc tubes are swept at 0.6x the circle radius so the weld openings
// stay small. The result passes every closed/orientable/embedded check and
// satisfies genus = 1 - (V - E) of the graph.
TubeSurface make_tube_surface(const SpatialGraph& graph, double radius, int n_circ = 16,
                              double n_long_per_unit = 8.0);

// One unknotted handle: two grid cells of one chart are opened and bridged by
// a half-elliptic tube arching over the surface. Genus rises by one, chi
// drops by two, and the knot (given as the surface curve it occupies, with
// its pushoff corridor width) is untouched.
struct StabilizationSite {
  int chart_id = 0;
  int ring_a = 0, circ_a = 0;
  int ring_b = 0, circ_b = 0;
};

TubeSurface k_stabilize_geometric(const TubeSurface& surface, const PolyCurve3& knot_on_surface,
                                  double corridor, const StabilizationSite& site);

// Seeded search for an admissible handle placement away from the knot.
StabilizationSite find_stabilization_site(const TubeSurface& surface,
                                          const PolyCurve3& knot_on_surface, double corridor,
                                          Rng& rng);

}  // namespace ksplit
