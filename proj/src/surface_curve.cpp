#include "ksplit/surface_curve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "ksplit/errors.hpp"

namespace ksplit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGridSnap = 1e-7;   // snap distance to grid lines, in cell units
constexpr double kParamTol = 1e-12;

const TubeChart& chart_of(const TubeSurface& surface, int chart_id) {
  if (chart_id < 0 || chart_id >= static_cast<int>(surface.charts.size())) {
    throw InputError("no such chart: " + std::to_string(chart_id));
  }
  return surface.charts[chart_id];
}

// Unwrapped chart coordinates in grid units: U = s * n_long, V = theta/(2*pi) * n_circ.
struct GridPoint {
  double u, v;
};

}  // namespace

CurveOnSurface curve_on_tube(const TubeSurface& surface, int chart_id,
                             const std::vector<std::pair<double, double>>& coords) {
  const TubeChart& ch = chart_of(surface, chart_id);
  if (coords.size() < 4) {
    throw InputError("chart curve needs at least 3 points plus the closure point");
  }

  // The final coordinate is the closure marker: first point shifted by the
  // integer wraps of the curve.
  const double ds = coords.back().first - coords.front().first;
  const double dt = (coords.back().second - coords.front().second) / (2.0 * kPi);
  const int wrap_long = static_cast<int>(std::lround(ds));
  const int wrap_mer = static_cast<int>(std::lround(dt));
  if (std::abs(ds - wrap_long) > 1e-6 || std::abs(dt - wrap_mer) > 1e-6) {
    throw InputError("chart curve does not close up to integer wraps");
  }
  if (!ch.closed) {
    if (wrap_long != 0) throw InputError("curve on an open chart cannot wrap longitudinally");
    for (const auto& [s, t] : coords) {
      if (s < -1e-9 || s > 1.0 + 1e-9) {
        throw InputError("curve on an open chart must keep s within [0,1]");
      }
    }
  }

  CurveOnSurface curve;
  curve.chart_id = chart_id;
  curve.coords = coords;
  curve.wrap_long = wrap_long;
  curve.wrap_mer = wrap_mer;

  // Work in grid units, snapping to grid lines so crossing classification is
  // stable, then insert every grid-line and diagonal crossing.
  auto to_grid = [&](const std::pair<double, double>& c) {
    GridPoint g{c.first * ch.n_long, c.second / (2.0 * kPi) * ch.n_circ};
    if (std::abs(g.u - std::lround(g.u)) < kGridSnap) g.u = std::lround(g.u);
    if (std::abs(g.v - std::lround(g.v)) < kGridSnap) g.v = std::lround(g.v);
    return g;
  };

  std::vector<GridPoint> refined;
  for (size_t k = 0; k + 1 < coords.size(); ++k) {
    GridPoint a = to_grid(coords[k]);
    GridPoint b = to_grid(coords[k + 1]);
    if (std::abs(a.u - b.u) < kParamTol && std::abs(a.v - b.v) < kParamTol) continue;
    refined.push_back(a);
    std::vector<double> xs;
    auto gather = [&xs](double va, double vb) {
      double lo = std::min(va, vb), hi = std::max(va, vb);
      for (double key = std::ceil(lo - kParamTol); key <= hi + kParamTol; key += 1.0) {
        if (std::abs(vb - va) < kParamTol) continue;
        double x = (key - va) / (vb - va);
        if (x > kParamTol && x < 1.0 - kParamTol) xs.push_back(x);
      }
    };
    gather(a.u, b.u);
    gather(a.v, b.v);
    gather(a.u - a.v, b.u - b.v);
    std::sort(xs.begin(), xs.end());
    for (double x : xs) {
      GridPoint p{a.u + x * (b.u - a.u), a.v + x * (b.v - a.v)};
      if (std::abs(p.u - std::lround(p.u)) < kGridSnap) p.u = std::lround(p.u);
      if (std::abs(p.v - std::lround(p.v)) < kGridSnap) p.v = std::lround(p.v);
      if (!refined.empty() && std::abs(p.u - refined.back().u) < kParamTol &&
          std::abs(p.v - refined.back().v) < kParamTol) {
        continue;
      }
      refined.push_back(p);
    }
  }
  if (refined.size() < 3) throw InputError("chart curve is degenerate after refinement");

  // Excluded-cell check per refined segment (closure segment included).
  auto cell_of_midpoint = [&](const GridPoint& a, const GridPoint& b) {
    double mu = 0.5 * (a.u + b.u), mv = 0.5 * (a.v + b.v);
    return std::pair<int, int>{static_cast<int>(std::floor(mu)),
                               static_cast<int>(std::floor(mv))};
  };
  GridPoint closing{refined.front().u + wrap_long * ch.n_long,
                    refined.front().v + wrap_mer * ch.n_circ};
  for (size_t k = 0; k < refined.size(); ++k) {
    const GridPoint& a = refined[k];
    const GridPoint& b = (k + 1 < refined.size()) ? refined[k + 1] : closing;
    auto [ci, cj] = cell_of_midpoint(a, b);
    if (ch.cell_excluded(ci, cj)) {
      throw InputError("chart curve enters a removed cell (junction opening or handle)");
    }
  }

  curve.refined.reserve(refined.size() + 1);
  for (const auto& g : refined) {
    curve.refined.emplace_back(g.u / ch.n_long, g.v / ch.n_circ * 2.0 * kPi);
  }
  curve.refined.emplace_back(closing.u / ch.n_long, closing.v / ch.n_circ * 2.0 * kPi);

  curve.points.closed = true;
  for (size_t k = 0; k + 1 < curve.refined.size(); ++k) {
    Point3 p = chart_point(surface.mesh, ch, curve.refined[k].first, curve.refined[k].second);
    if (!curve.points.vertices.empty() && dist(p, curve.points.vertices.back()) < 1e-12) continue;
    curve.points.vertices.push_back(p);
  }
  while (curve.points.vertices.size() > 1 &&
         dist(curve.points.vertices.front(), curve.points.vertices.back()) < 1e-12) {
    curve.points.vertices.pop_back();
  }
  validate_polycurve(curve.points);
  return curve;
}

CurveOnSurface curve_from_edge_path(const TubeSurface& surface, EdgePath path) {
  // cut_components validates the walk; here just realize the polyline.
  CurveOnSurface curve;
  curve.chart_id = -1;
  curve.edge_path = std::move(path);
  curve.points.closed = true;
  for (int vid : curve.edge_path) {
    if (vid < 0 || vid >= static_cast<int>(surface.mesh.vertices.size())) {
      throw InputError("edge path vertex out of range");
    }
    curve.points.vertices.push_back(surface.mesh.vertices[vid]);
  }
  validate_polycurve(curve.points);
  return curve;
}

namespace {

// Longest run of free cells in a cyclic (or linear) 0..n-1 index space.
std::pair<int, int> longest_free_run(const std::set<int>& blocked, int n, bool cyclic) {
  if (blocked.empty()) return {0, n};
  int best_start = -1, best_len = 0;
  for (int start = 0; start < n; ++start) {
    if (blocked.count(start)) continue;
    if (!cyclic && start > 0 && !blocked.count(start - 1)) continue;
    if (cyclic && !blocked.count(((start - 1) % n + n) % n)) continue;
    int len = 0;
    while (len < n && !blocked.count((start + len) % n)) {
      ++len;
      if (!cyclic && start + len >= n) break;
    }
    if (len > best_len) {
      best_len = len;
      best_start = start;
    }
  }
  return {best_start, best_len};
}

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

}  // namespace

CurveOnSurface make_longitude_curve(const TubeSurface& surface, int chart_id,
                                    int meridian_wraps) {
  const TubeChart& ch = chart_of(surface, chart_id);
  if (!ch.closed) throw InputError("longitude curves need a closed chart");
  std::vector<std::pair<double, double>> coords;
  const double q = meridian_wraps;

  if (ch.excluded.empty()) {
    double theta0 = kPi / ch.n_circ;  // mid-cell
    int n = std::max({2 * ch.n_long, 16 * std::abs(meridian_wraps), 48});
    for (int k = 0; k <= n; ++k) {
      double t = static_cast<double>(k) / n;
      coords.emplace_back(t, theta0 + 2.0 * kPi * q * t);
    }
    return curve_on_tube(surface, chart_id, coords);
  }

  // Gather the meridian winding into the longest opening-free span of rings
  // and hold a safe angle elsewhere.
  std::set<int> rings_blocked, circ_blocked;
  for (const auto& [i, j] : ch.excluded) {
    rings_blocked.insert(i);
    circ_blocked.insert(j);
  }
  auto [ring0, ring_len] = longest_free_run(rings_blocked, ch.n_long, true);
  auto [circ0, circ_len] = longest_free_run(circ_blocked, ch.n_circ, true);
  if (ring_len < 4) throw GeometryError("no opening-free span of rings for a longitude curve");
  if (circ_len < 2) throw GeometryError("no opening-free angle for a longitude curve");

  const double theta_safe = 2.0 * kPi * (circ0 + circ_len / 2.0) / ch.n_circ + kPi / ch.n_circ;
  const double s_anchor = static_cast<double>(ring0 + 1) / ch.n_long;
  const double ramp_len = static_cast<double>(ring_len - 2) / ch.n_long;

  // enough samples that the ramp itself carries ~24 points per wrap
  const int per_wrap = static_cast<int>(std::ceil(24.0 * std::abs(meridian_wraps) /
                                                  std::max(ramp_len, 0.05)));
  const int n = std::max({2 * ch.n_long, per_wrap, 64});
  for (int k = 0; k <= n; ++k) {
    double t = static_cast<double>(k) / n;
    double theta = theta_safe + 2.0 * kPi * q * smoothstep(t * 1.0 / (ramp_len)*1.0);
    // parameterize s so the ramp occupies [s_anchor, s_anchor + ramp_len]
    coords.emplace_back(s_anchor + t, theta);
  }
  return curve_on_tube(surface, chart_id, coords);
}

CurveOnSurface make_meridian_curve(const TubeSurface& surface, int chart_id, double at_s) {
  const TubeChart& ch = chart_of(surface, chart_id);
  double snapped = std::lround(at_s * ch.n_long) / static_cast<double>(ch.n_long);
  if (std::abs(snapped - at_s) * ch.n_long < 0.25) at_s = snapped;  // prefer grid rings
  std::vector<std::pair<double, double>> coords;
  int n = 2 * ch.n_circ;
  for (int k = 0; k <= n; ++k) {
    coords.emplace_back(at_s, 2.0 * kPi * k / n);
  }
  return curve_on_tube(surface, chart_id, coords);
}

CurveOnSurface dehn_twist_curve(const TubeSurface& surface, const CurveOnSurface& curve, int k) {
  if (!curve.is_chart_curve()) throw InputError("Dehn twist needs a chart curve");
  if (k == 0) return curve;
  const TubeChart& ch = chart_of(surface, curve.chart_id);
  if (ch.excluded.empty()) {
    // Shear: each pass around the core gains k meridian wraps.
    std::vector<std::pair<double, double>> coords;
    double s0 = curve.coords.front().first;
    coords.reserve(curve.coords.size());
    for (const auto& [s, t] : curve.coords) {
      coords.emplace_back(s, t + 2.0 * kPi * k * (s - s0));
    }
    return curve_on_tube(surface, curve.chart_id, coords);
  }
  if (curve.wrap_long != 1) {
    throw InputError("Dehn twist on an interrupted chart needs a once-around curve");
  }
  return make_longitude_curve(surface, curve.chart_id, curve.wrap_mer + k);
}

PushoffPair surface_pushoffs(const TubeSurface& surface, const CurveOnSurface& curve,
                             double epsilon) {
  if (!curve.is_chart_curve()) {
    throw InputError("pushoffs are computed in tube coordinates; curve has none");
  }
  const TubeChart& ch = chart_of(surface, curve.chart_id);
  if (epsilon <= tol_geom) throw InputError("epsilon too small");
  if (epsilon >= 0.5 * ch.radius) {
    throw InputError("epsilon " + std::to_string(epsilon) + " too large; must stay below half "
                     "the tube radius " + std::to_string(ch.radius));
  }
  auto [len_s, len_t] = chart_scale(ch);

  const auto& c = curve.coords;
  const size_t n = c.size() - 1;  // last entry is the closure marker
  const double jump_s = c.back().first - c.front().first;
  const double jump_t = c.back().second - c.front().second;

  auto at = [&](long k) {
    double shift_s = 0.0, shift_t = 0.0;
    long kk = k;
    while (kk < 0) {
      kk += n;
      shift_s -= jump_s;
      shift_t -= jump_t;
    }
    while (kk >= static_cast<long>(n)) {
      kk -= n;
      shift_s += jump_s;
      shift_t += jump_t;
    }
    return std::pair<double, double>{c[kk].first + shift_s, c[kk].second + shift_t};
  };

  auto offset_coords = [&](double side) {
    std::vector<std::pair<double, double>> out;
    out.reserve(n + 1);
    for (size_t k = 0; k <= n; ++k) {
      auto prev = at(static_cast<long>(k) - 1);
      auto next = at(static_cast<long>(k) + 1);
      auto here = at(static_cast<long>(k));
      // metric: ds -> len_s, dtheta -> radius (len_t is the radius)
      double tx = (next.first - prev.first) * len_s;
      double ty = (next.second - prev.second) * len_t;
      double tn = std::hypot(tx, ty);
      if (tn < 1e-15) throw InputError("pushoff tangent degenerate");
      double px = -ty / tn, py = tx / tn;
      out.emplace_back(here.first + side * epsilon * px / len_s,
                       here.second + side * epsilon * py / len_t);
    }
    return out;
  };

  PushoffPair pair;
  pair.epsilon = epsilon;
  try {
    pair.alpha1 = curve_on_tube(surface, curve.chart_id, offset_coords(+1.0));
    pair.alpha2 = curve_on_tube(surface, curve.chart_id, offset_coords(-1.0));
  } catch (const Error& e) {
    throw InputError(std::string("pushoff construction failed (") + e.what() +
                     "); try epsilon = " + std::to_string(epsilon / 2));
  }
  if (pair.alpha1.wrap_long != curve.wrap_long || pair.alpha1.wrap_mer != curve.wrap_mer ||
      pair.alpha2.wrap_long != curve.wrap_long || pair.alpha2.wrap_mer != curve.wrap_mer) {
    throw GeometryError("pushoffs changed wrapping class");
  }
  double d12 = curve_curve_distance(pair.alpha1.points, pair.alpha2.points);
  double d01 = curve_curve_distance(curve.points, pair.alpha1.points);
  double d02 = curve_curve_distance(curve.points, pair.alpha2.points);
  if (std::min({d12, d01, d02}) <= tol_geom) {
    throw InputError("pushoffs collide; try epsilon = " + std::to_string(epsilon / 2));
  }
  return pair;
}

// ---------------------------------------------------------------------------
// Mesh refinement along a chart curve.
// ---------------------------------------------------------------------------

namespace {

struct RefPoint {
  double u = 0, v = 0;  // unwrapped grid units
  int vid = -1;
  enum Kind { kCorner, kOnEdge, kInterior } kind = kInterior;
  int ea = -1, eb = -1;  // mesh edge the point lies on (kOnEdge)
  double et = 0.0;       // parameter along ea -> eb
};

struct PolyNode {
  int vid;
  double x, y;  // triangle-local 2D coordinates
};

std::uint64_t tri_key(int a, int b, int c) {
  std::array<int, 3> k{a, b, c};
  std::sort(k.begin(), k.end());
  return (static_cast<std::uint64_t>(k[0]) << 42) ^ (static_cast<std::uint64_t>(k[1]) << 21) ^
         static_cast<std::uint64_t>(k[2]);
}

std::uint64_t ekey(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

double cross2d(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

// Non-strict: points on the candidate ear's boundary block it too, so an ear
// diagonal never passes through another polygon vertex.
bool point_blocks_ear(double px, double py, const PolyNode& a, const PolyNode& b,
                      const PolyNode& c) {
  double d1 = cross2d(b.x - a.x, b.y - a.y, px - a.x, py - a.y);
  double d2 = cross2d(c.x - b.x, c.y - b.y, px - b.x, py - b.y);
  double d3 = cross2d(a.x - c.x, a.y - c.y, px - c.x, py - c.y);
  double eps = 1e-12;
  return d1 > -eps && d2 > -eps && d3 > -eps;
}

void ear_clip(std::vector<PolyNode> poly, std::vector<Triangle>& out) {
  const double eps_area = 1e-12;
  while (poly.size() > 3) {
    bool clipped = false;
    for (size_t i = 0; i < poly.size(); ++i) {
      const PolyNode& p0 = poly[(i + poly.size() - 1) % poly.size()];
      const PolyNode& p1 = poly[i];
      const PolyNode& p2 = poly[(i + 1) % poly.size()];
      double area = cross2d(p1.x - p0.x, p1.y - p0.y, p2.x - p0.x, p2.y - p0.y);
      if (area <= eps_area) continue;
      bool blocked = false;
      for (size_t j = 0; j < poly.size(); ++j) {
        if (j == i || j == (i + poly.size() - 1) % poly.size() ||
            j == (i + 1) % poly.size()) {
          continue;
        }
        if (point_blocks_ear(poly[j].x, poly[j].y, p0, p1, p2)) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      out.push_back({p0.vid, p1.vid, p2.vid});
      poly.erase(poly.begin() + i);
      clipped = true;
      break;
    }
    if (!clipped) throw GeometryError("ear clipping failed while refining mesh along curve");
  }
  double area = cross2d(poly[1].x - poly[0].x, poly[1].y - poly[0].y, poly[2].x - poly[0].x,
                        poly[2].y - poly[0].y);
  if (area <= eps_area) throw GeometryError("degenerate remainder while refining mesh");
  out.push_back({poly[0].vid, poly[1].vid, poly[2].vid});
}

// Split the polygon along embedded chains recursively, then ear clip.
void triangulate_with_chains(std::vector<PolyNode> poly,
                             std::vector<std::vector<PolyNode>> chains,
                             std::vector<Triangle>& out) {
  if (chains.empty()) {
    ear_clip(std::move(poly), out);
    return;
  }
  auto chain = chains.back();
  chains.pop_back();
  int ia = -1, ib = -1;
  for (size_t i = 0; i < poly.size(); ++i) {
    if (poly[i].vid == chain.front().vid) ia = static_cast<int>(i);
    if (poly[i].vid == chain.back().vid) ib = static_cast<int>(i);
  }
  if (ia < 0 || ib < 0 || ia == ib) {
    throw GeometryError("curve chain does not span the triangle it was assigned to");
  }

  auto walk = [&](int from, int to) {
    std::vector<PolyNode> arc;
    for (int i = from;; i = (i + 1) % static_cast<int>(poly.size())) {
      arc.push_back(poly[i]);
      if (i == to) break;
    }
    return arc;
  };
  std::vector<PolyNode> poly_a = walk(ia, ib);
  for (size_t k = chain.size() - 2; k >= 1; --k) poly_a.push_back(chain[k]);
  std::vector<PolyNode> poly_b = walk(ib, ia);
  for (size_t k = 1; k + 1 < chain.size(); ++k) poly_b.push_back(chain[k]);

  auto contains_vid = [](const std::vector<PolyNode>& p, int vid) {
    for (const auto& n : p)
      if (n.vid == vid) return true;
    return false;
  };
  std::vector<std::vector<PolyNode>> chains_a, chains_b;
  for (auto& c : chains) {
    if (contains_vid(poly_a, c.front().vid) && contains_vid(poly_a, c.back().vid)) {
      chains_a.push_back(std::move(c));
    } else {
      chains_b.push_back(std::move(c));
    }
  }
  triangulate_with_chains(std::move(poly_a), std::move(chains_a), out);
  triangulate_with_chains(std::move(poly_b), std::move(chains_b), out);
}

}  // namespace

RefinedAlongCurve refine_mesh_along_curve(const TubeSurface& surface,
                                          const CurveOnSurface& curve) {
  if (!curve.is_chart_curve()) {
    return {surface.mesh, curve.edge_path};
  }
  const TubeChart& ch = chart_of(surface, curve.chart_id);
  RefinedAlongCurve out;
  out.mesh = surface.mesh;

  // Classify the refined curve points (dropping the closure duplicate).
  const size_t n = curve.refined.size() - 1;
  std::vector<RefPoint> pts(n);
  for (size_t k = 0; k < n; ++k) {
    RefPoint& p = pts[k];
    p.u = curve.refined[k].first * ch.n_long;
    p.v = curve.refined[k].second / (2.0 * kPi) * ch.n_circ;
    double ru = std::lround(p.u), rv = std::lround(p.v);
    bool on_u = std::abs(p.u - ru) < kGridSnap;
    bool on_v = std::abs(p.v - rv) < kGridSnap;
    double diag = p.u - p.v;
    bool on_diag = std::abs(diag - std::lround(diag)) < kGridSnap;
    if (on_u && on_v) {
      p.kind = RefPoint::kCorner;
      p.vid = ch.vertex_id(static_cast<int>(ru), static_cast<int>(rv));
    } else if (on_u) {
      p.kind = RefPoint::kOnEdge;
      int j = static_cast<int>(std::floor(p.v));
      p.ea = ch.vertex_id(static_cast<int>(ru), j);
      p.eb = ch.vertex_id(static_cast<int>(ru), j + 1);
      p.et = p.v - j;
    } else if (on_v) {
      p.kind = RefPoint::kOnEdge;
      int i = static_cast<int>(std::floor(p.u));
      p.ea = ch.vertex_id(i, static_cast<int>(rv));
      p.eb = ch.vertex_id(i + 1, static_cast<int>(rv));
      p.et = p.u - i;
    } else if (on_diag) {
      p.kind = RefPoint::kOnEdge;
      int i = static_cast<int>(std::floor(p.u));
      int j = static_cast<int>(std::floor(p.v));
      p.ea = ch.vertex_id(i, j);
      p.eb = ch.vertex_id(i + 1, j + 1);
      p.et = p.u - i;
    } else {
      p.kind = RefPoint::kInterior;
    }
    if (p.kind != RefPoint::kCorner) {
      p.vid = static_cast<int>(out.mesh.vertices.size());
      out.mesh.vertices.push_back(
          chart_point(surface.mesh, ch, curve.refined[k].first, curve.refined[k].second));
    }
  }

  // Edge split registry (canonical edge direction).
  std::unordered_map<std::uint64_t, std::vector<std::pair<double, int>>> splits;
  for (const auto& p : pts) {
    if (p.kind != RefPoint::kOnEdge) continue;
    double t = p.ea < p.eb ? p.et : 1.0 - p.et;
    splits[ekey(p.ea, p.eb)].emplace_back(t, p.vid);
  }
  for (auto& [key, list] : splits) std::sort(list.begin(), list.end());

  // Assign interior segments to mesh triangles and group them into chains.
  struct Task {
    std::vector<std::vector<PolyNode>> chains;
    std::unordered_map<int, std::pair<double, double>> corner_xy;  // vid -> local 2D
  };
  std::unordered_map<std::uint64_t, Task> tasks;

  auto local_node = [&](const RefPoint& p, int base_i, int base_j) {
    return PolyNode{p.vid, p.u - base_i, p.v - base_j};
  };

  std::vector<PolyNode> chain;
  std::uint64_t chain_tri = 0;
  auto flush_chain = [&]() {
    if (chain.size() >= 2) {
      // Chains that already run along a polygon edge need no split.
      tasks[chain_tri].chains.push_back(chain);
    }
    chain.clear();
  };

  for (size_t k = 0; k < n; ++k) {
    const RefPoint& a = pts[k];
    RefPoint b = pts[(k + 1) % n];
    if ((k + 1) % n == 0) {
      b.u += curve.wrap_long * ch.n_long;
      b.v += curve.wrap_mer * ch.n_circ;
    }
    double mu = 0.5 * (a.u + b.u), mv = 0.5 * (a.v + b.v);
    double ru = std::lround(mu), rv = std::lround(mv);
    bool seg_on_grid = std::abs(mu - ru) < kGridSnap || std::abs(mv - rv) < kGridSnap ||
                       std::abs((mu - mv) - std::lround(mu - mv)) < kGridSnap;
    if (seg_on_grid) {
      // The segment runs along a mesh edge (or a split piece of one).
      flush_chain();
      continue;
    }
    int bi = static_cast<int>(std::floor(mu));
    int bj = static_cast<int>(std::floor(mv));
    double f = mu - bi, g = mv - bj;
    int v00 = ch.vertex_id(bi, bj), v10 = ch.vertex_id(bi + 1, bj);
    int v11 = ch.vertex_id(bi + 1, bj + 1), v01 = ch.vertex_id(bi, bj + 1);
    std::uint64_t key =
        (f >= g) ? tri_key(v00, v10, v11) : tri_key(v00, v11, v01);
    Task& task = tasks[key];
    task.corner_xy[v00] = {0.0, 0.0};
    task.corner_xy[v11] = {1.0, 1.0};
    if (f >= g) {
      task.corner_xy[v10] = {1.0, 0.0};
    } else {
      task.corner_xy[v01] = {0.0, 1.0};
    }
    if (chain.empty() || chain_tri != key) {
      flush_chain();
      chain_tri = key;
      chain.push_back(local_node(a, bi, bj));
    }
    RefPoint b_local = b;
    chain.push_back(local_node(b_local, bi, bj));
  }
  flush_chain();

  // Merge the wrap-around chain halves: if the first and last chains belong
  // to the same triangle and share an endpoint, they are one chain split by
  // the traversal start.
  // (Handled naturally: the loop above treats index n-1 -> 0 like any other
  // segment, so a chain through the start point was flushed in two pieces
  // that share the start vertex. Stitch them.)
  for (auto& [key, task] : tasks) {
    auto& cs = task.chains;
    bool merged = true;
    while (merged && cs.size() >= 2) {
      merged = false;
      for (size_t i = 0; i < cs.size() && !merged; ++i) {
        for (size_t j = 0; j < cs.size() && !merged; ++j) {
          if (i == j) continue;
          if (cs[i].back().vid == cs[j].front().vid) {
            cs[i].insert(cs[i].end(), cs[j].begin() + 1, cs[j].end());
            cs.erase(cs.begin() + j);
            merged = true;
          }
        }
      }
    }
  }

  // Rebuild the affected triangles.
  std::vector<Triangle> rebuilt;
  rebuilt.reserve(out.mesh.triangles.size() + 4 * splits.size());
  for (const auto& tri : out.mesh.triangles) {
    std::array<std::pair<int, int>, 3> edges{{{tri.a, tri.b}, {tri.b, tri.c}, {tri.c, tri.a}}};
    bool touched = false;
    for (auto [a, b] : edges) {
      if (splits.count(ekey(a, b))) touched = true;
    }
    auto key = tri_key(tri.a, tri.b, tri.c);
    auto task_it = tasks.find(key);
    if (task_it != tasks.end()) touched = true;
    if (!touched) {
      rebuilt.push_back(tri);
      continue;
    }

    // Local 2D frame: cell coordinates when known, canonical otherwise.
    std::unordered_map<int, std::pair<double, double>> corner_xy;
    if (task_it != tasks.end() && task_it->second.corner_xy.size() == 3) {
      corner_xy = task_it->second.corner_xy;
    } else {
      corner_xy[tri.a] = {0.0, 0.0};
      corner_xy[tri.b] = {1.0, 0.0};
      corner_xy[tri.c] = {0.0, 1.0};
    }

    std::vector<PolyNode> poly;
    for (auto [a, b] : edges) {
      auto [ax, ay] = corner_xy[a];
      poly.push_back({a, ax, ay});
      auto it = splits.find(ekey(a, b));
      if (it == splits.end()) continue;
      auto [bx, by] = corner_xy[b];
      auto list = it->second;  // params along min(a,b) -> max(a,b)
      if (a > b) {
        std::reverse(list.begin(), list.end());
        for (auto& [t, vid] : list) t = 1.0 - t;
      }
      for (auto [t, vid] : list) {
        poly.push_back({vid, ax + t * (bx - ax), ay + t * (by - ay)});
      }
    }

    std::vector<std::vector<PolyNode>> chains_here;
    if (task_it != tasks.end()) {
      for (auto& c : task_it->second.chains) {
        // skip chains that lie along the polygon boundary (grid-aligned)
        if (c.size() == 2) {
          bool adjacent = false;
          for (size_t i = 0; i < poly.size(); ++i) {
            const auto& p0 = poly[i];
            const auto& p1 = poly[(i + 1) % poly.size()];
            if ((p0.vid == c.front().vid && p1.vid == c.back().vid) ||
                (p1.vid == c.front().vid && p0.vid == c.back().vid)) {
              adjacent = true;
              break;
            }
          }
          if (adjacent) continue;
        }
        chains_here.push_back(c);
      }
    }
    triangulate_with_chains(std::move(poly), std::move(chains_here), rebuilt);
  }
  out.mesh.triangles = std::move(rebuilt);

  out.path.clear();
  for (const auto& p : pts) {
    if (out.path.empty() || out.path.back() != p.vid) out.path.push_back(p.vid);
  }
  while (out.path.size() > 1 && out.path.front() == out.path.back()) out.path.pop_back();
  return out;
}

bool is_separating(const TubeSurface& surface, const CurveOnSurface& curve) {
  if (!curve.is_chart_curve()) {
    return components_after_cut(surface.mesh, curve.edge_path) == 2;
  }
  auto refined = refine_mesh_along_curve(surface, curve);
  return components_after_cut(refined.mesh, refined.path) == 2;
}

}  // namespace ksplit
