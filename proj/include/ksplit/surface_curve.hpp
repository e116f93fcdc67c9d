#pragma once

#include <utility>
#include <vector>

#include "ksplit/tube.hpp"

namespace ksplit {

// A simple closed curve embedded in a tube surface. Chart curves carry
// unwrapped (s, theta) coordinates: the closure jump must be an integer
// number of wraps in each direction, and those wraps are the curve's
// longitude/meridian classes. `points` is the realized 3D polyline, refined
// at every grid-line and cell-diagonal crossing so each segment lies inside
// a single mesh triangle (hence exactly on the surface).
struct CurveOnSurface {
  int chart_id = -1;  // -1 for edge-path curves
  std::vector<std::pair<double, double>> coords;   // as given
  std::vector<std::pair<double, double>> refined;  // with crossing points inserted
  EdgePath edge_path;                              // for edge-path curves
  int wrap_long = 0;
  int wrap_mer = 0;
  PolyCurve3 points;

  bool is_chart_curve() const { return chart_id >= 0; }
};

// Builds and validates a chart curve: closed, simple, clear of excluded
// cells. Throws InputError when the coordinates self-cross or do not close
// up to integer wraps.
CurveOnSurface curve_on_tube(const TubeSurface& surface, int chart_id,
                             const std::vector<std::pair<double, double>>& coords);

// Wraps an existing closed walk along mesh edges.
CurveOnSurface curve_from_edge_path(const TubeSurface& surface, EdgePath path);

// Longitude with the given number of meridian wraps, mid-cell phase. On
// charts interrupted by junction openings the meridian winding is gathered
// into the longest opening-free span and the rest of the curve runs at a
// safe constant angle, so the curve never enters an opening.
CurveOnSurface make_longitude_curve(const TubeSurface& surface, int chart_id, int meridian_wraps);

// Meridian ring of the chart at longitude s.
CurveOnSurface make_meridian_curve(const TubeSurface& surface, int chart_id, double at_s);

// Chart-coordinate Dehn twist along a meridian locus: every longitude pass
// gains k meridian wraps. Charts with openings are rebuilt through
// make_longitude_curve (requires a once-around curve there).
CurveOnSurface dehn_twist_curve(const TubeSurface& surface, const CurveOnSurface& curve, int k);

struct PushoffPair {
  CurveOnSurface alpha1, alpha2;
  double epsilon = 0.0;
};

// The two parallel copies of the curve offset to either side within the
// surface (chart-space offset scaled by the local metric). Both copies keep
// the curve's wrapping classes and all three curves are pairwise disjoint.
PushoffPair surface_pushoffs(const TubeSurface& surface, const CurveOnSurface& curve,
                             double epsilon);

// Mesh refined so the curve runs along edges, plus the resulting closed walk.
struct RefinedAlongCurve {
  SurfaceMesh mesh;
  EdgePath path;
};
RefinedAlongCurve refine_mesh_along_curve(const TubeSurface& surface,
                                          const CurveOnSurface& curve);

// True when cutting the host surface along the curve leaves two components.
bool is_separating(const TubeSurface& surface, const CurveOnSurface& curve);

}  // namespace ksplit
