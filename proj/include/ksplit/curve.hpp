#pragma once

#include <optional>
#include <vector>

#include "ksplit/geom.hpp"

namespace ksplit {

// Piecewise-linear curve in 3-space. Closed curves implicitly join the last
// vertex back to the first.
struct PolyCurve3 {
  std::vector<Point3> vertices;
  bool closed = true;

  int segment_count() const {
    if (vertices.size() < 2) return 0;
    return closed ? static_cast<int>(vertices.size()) : static_cast<int>(vertices.size()) - 1;
  }
  Point3 segment_start(int i) const { return vertices[i]; }
  Point3 segment_end(int i) const { return vertices[(i + 1) % vertices.size()]; }

  double length() const;
};

// Throws InputError unless the curve is finite, non-degenerate, and simple:
//   closed curves have >= 3 vertices, consecutive vertices are distinct, and
//   non-adjacent segments stay more than tol_geom apart. The error message
//   names the offending segment pair.
void validate_polycurve(const PolyCurve3& c);

// Minimum distance between non-adjacent segments of one curve.
double min_self_clearance(const PolyCurve3& c);

// Doubly-critical style self distance: minimum over non-adjacent segment
// pairs whose connecting chord is near-perpendicular to both segments. This
// ignores the trivially small gaps between nearly consecutive segments of a
// finely sampled smooth curve and reports the distance between genuinely
// opposing strands (2R for a round circle of radius R).
double perpendicular_self_clearance(const PolyCurve3& c);

// Smallest local bend radius, estimated from the turning angle at each
// vertex. A swept tube stays locally embedded while its radius is below this.
double min_local_bend_radius(const PolyCurve3& c);

// Minimum distance between segments of two different curves.
double curve_curve_distance(const PolyCurve3& a, const PolyCurve3& b);

// Insert the midpoint of every segment; topological quantities must not change.
PolyCurve3 subdivide_midpoints(const PolyCurve3& c);

// Closest position on the curve to p: returns (segment index, parameter in [0,1], distance).
struct CurveProjection {
  int segment;
  double t;
  double distance;
};
CurveProjection project_to_curve(const PolyCurve3& c, const Point3& p);

// PL approximation of the (p,q) curve on the torus of radii (major, minor):
// wraps p times around the torus axis and q times around the core circle.
// Requires gcd(|p|,|q|) == 1, 0 < minor < major, n >= 12*(|p|+|q|).
PolyCurve3 make_torus_knot_curve(int p, int q, double major_radius, double minor_radius, int n);

// Round unknot of the given radius in the xy-plane.
PolyCurve3 make_circle_curve(double radius, int n, const Point3& center = {0, 0, 0});

// Standard parametric figure-eight knot, scaled so features are desk sized.
PolyCurve3 make_figure_eight_curve(int n);

// Knot and tunnel arcs, Gamma = K union tau. Arc endpoints lie on circles.
struct SpatialGraph {
  std::vector<PolyCurve3> circles;
  std::vector<PolyCurve3> arcs;
};

// Validates the constituent curves, connectivity, endpoint attachment, and
// pairwise disjointness away from the declared junctions.
void validate_spatial_graph(const SpatialGraph& g);

// Minimum clearance of the graph: the smallest distance between pieces of
// geometry that are not meant to touch. Self distances use the perpendicular
// clearance above; inter-curve approaches whose nearest points both fall
// within `junction_exclusion` of a junction belong to the weld region and are
// not counted. Bounds the admissible tube radius.
double graph_clearance(const SpatialGraph& g, double junction_exclusion = 0.0);

// Default tube radius for a graph: a quarter of the graph clearance, capped
// by the local bend radii, with the weld exclusion zone solved consistently.
double suggest_tube_radius(const SpatialGraph& g);

// Unknot plus one tunnel arc (genus-2 surface fixture) and the dumbbell
// (two circles joined by one arc).
SpatialGraph make_unknot_with_tunnel(double radius, int n);
SpatialGraph make_dumbbell_graph(double circle_radius, double separation, int n);

// One tunnel arc bridging two nearby points of the knot, bulging radially
// outward where nothing else can reach. Works for knots whose outermost
// point (largest distance from the z-axis) has a locally convex outside.
SpatialGraph make_knot_with_eyeglass_tunnel(PolyCurve3 knot, double bulge);

// Figure-eight knot (tunnel number one) with one tunnel arc.
SpatialGraph make_figure_eight_with_tunnel(int n);

// Trefoil, as the (2,3) torus curve, with one tunnel arc.
SpatialGraph make_trefoil_with_tunnel(int n);

}  // namespace ksplit
