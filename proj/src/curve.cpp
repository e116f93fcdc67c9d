#include "ksplit/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ksplit/errors.hpp"

namespace ksplit {

namespace {
constexpr double kPi = std::numbers::pi;

bool segments_adjacent(const PolyCurve3& c, int i, int j) {
  if (i == j) return true;
  int n = c.segment_count();
  if (std::abs(i - j) == 1) return true;
  if (c.closed && (std::abs(i - j) == n - 1)) return true;
  return false;
}
}  // namespace

double PolyCurve3::length() const {
  double total = 0.0;
  for (int i = 0; i < segment_count(); ++i) total += dist(segment_start(i), segment_end(i));
  return total;
}

void validate_polycurve(const PolyCurve3& c) {
  const int nv = static_cast<int>(c.vertices.size());
  if (c.closed && nv < 3) throw InputError("closed curve needs at least 3 vertices");
  if (!c.closed && nv < 2) throw InputError("open curve needs at least 2 vertices");
  for (const auto& v : c.vertices) {
    if (!all_finite(v)) throw InputError("curve vertex has non-finite coordinate");
  }
  const int ns = c.segment_count();
  for (int i = 0; i < ns; ++i) {
    if (dist(c.segment_start(i), c.segment_end(i)) <= tol_geom) {
      throw InputError("consecutive curve vertices coincide at segment " + std::to_string(i));
    }
  }
  for (int i = 0; i < ns; ++i) {
    for (int j = i + 1; j < ns; ++j) {
      if (segments_adjacent(c, i, j)) continue;
      double d = segment_segment_distance(c.segment_start(i), c.segment_end(i),
                                          c.segment_start(j), c.segment_end(j));
      if (d <= tol_geom) {
        throw GeometryError("curve is not simple: segments " + std::to_string(i) + " and " +
                            std::to_string(j) + " are " + std::to_string(d) + " apart");
      }
    }
  }
}

double min_self_clearance(const PolyCurve3& c) {
  double best = std::numeric_limits<double>::infinity();
  const int ns = c.segment_count();
  for (int i = 0; i < ns; ++i) {
    for (int j = i + 1; j < ns; ++j) {
      if (segments_adjacent(c, i, j)) continue;
      best = std::min(best, segment_segment_distance(c.segment_start(i), c.segment_end(i),
                                                     c.segment_start(j), c.segment_end(j)));
    }
  }
  return best;
}

double perpendicular_self_clearance(const PolyCurve3& c) {
  double best = std::numeric_limits<double>::infinity();
  const int ns = c.segment_count();
  for (int i = 0; i < ns; ++i) {
    for (int j = i + 1; j < ns; ++j) {
      if (segments_adjacent(c, i, j)) continue;
      Vec3 cp_a, cp_b;
      double d = segment_segment_closest(c.segment_start(i), c.segment_end(i),
                                         c.segment_start(j), c.segment_end(j), cp_a, cp_b);
      if (d <= tol_geom) return 0.0;
      Vec3 chord = (cp_b - cp_a) / d;
      Vec3 ta = normalized(c.segment_end(i) - c.segment_start(i));
      Vec3 tb = normalized(c.segment_end(j) - c.segment_start(j));
      if (std::abs(dot(chord, ta)) < 0.5 && std::abs(dot(chord, tb)) < 0.5) {
        best = std::min(best, d);
      }
    }
  }
  return best;
}

double min_local_bend_radius(const PolyCurve3& c) {
  double best = std::numeric_limits<double>::infinity();
  const int nv = static_cast<int>(c.vertices.size());
  int first = c.closed ? 0 : 1;
  int last = c.closed ? nv : nv - 1;
  for (int i = first; i < last; ++i) {
    Vec3 prev = c.vertices[(i + nv - 1) % nv];
    Vec3 here = c.vertices[i];
    Vec3 next = c.vertices[(i + 1) % nv];
    Vec3 d1 = here - prev, d2 = next - here;
    double l1 = norm(d1), l2 = norm(d2);
    double cosang = std::clamp(dot(d1, d2) / (l1 * l2), -1.0, 1.0);
    double turn = std::acos(cosang);
    if (turn < 1e-12) continue;
    best = std::min(best, std::min(l1, l2) / turn);
  }
  return best;
}

double curve_curve_distance(const PolyCurve3& a, const PolyCurve3& b) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < a.segment_count(); ++i) {
    for (int j = 0; j < b.segment_count(); ++j) {
      best = std::min(best, segment_segment_distance(a.segment_start(i), a.segment_end(i),
                                                     b.segment_start(j), b.segment_end(j)));
    }
  }
  return best;
}

PolyCurve3 subdivide_midpoints(const PolyCurve3& c) {
  PolyCurve3 out;
  out.closed = c.closed;
  const int nv = static_cast<int>(c.vertices.size());
  for (int i = 0; i < nv; ++i) {
    out.vertices.push_back(c.vertices[i]);
    bool has_next = c.closed || i + 1 < nv;
    if (has_next) {
      Point3 mid = (c.vertices[i] + c.vertices[(i + 1) % nv]) * 0.5;
      out.vertices.push_back(mid);
    }
  }
  return out;
}

CurveProjection project_to_curve(const PolyCurve3& c, const Point3& p) {
  CurveProjection best{-1, 0.0, std::numeric_limits<double>::infinity()};
  for (int i = 0; i < c.segment_count(); ++i) {
    Vec3 a = c.segment_start(i), b = c.segment_end(i);
    Vec3 ab = b - a;
    double t = norm2(ab) > 0 ? std::clamp(dot(p - a, ab) / norm2(ab), 0.0, 1.0) : 0.0;
    double d = dist(p, a + ab * t);
    if (d < best.distance) best = {i, t, d};
  }
  return best;
}

PolyCurve3 make_torus_knot_curve(int p, int q, double major_radius, double minor_radius, int n) {
  bool axis_case = (std::abs(p) == 1 && q == 0) || (p == 0 && std::abs(q) == 1);
  if (!axis_case && std::gcd(std::abs(p), std::abs(q)) != 1) {
    throw InputError("torus curve requires gcd(p,q) = 1, got (" + std::to_string(p) + "," +
                     std::to_string(q) + ")");
  }
  if (!(0 < minor_radius && minor_radius < major_radius)) {
    throw InputError("torus curve requires 0 < minor_radius < major_radius");
  }
  if (n < 12 * (std::abs(p) + std::abs(q))) {
    throw InputError("torus curve needs n >= 12*(|p|+|q|)");
  }
  PolyCurve3 c;
  c.closed = true;
  c.vertices.reserve(n);
  for (int i = 0; i < n; ++i) {
    double phi = 2.0 * kPi * i / n;
    double lon = p * phi, mer = q * phi;
    double w = major_radius + minor_radius * std::cos(mer);
    c.vertices.push_back({w * std::cos(lon), w * std::sin(lon), minor_radius * std::sin(mer)});
  }
  validate_polycurve(c);
  return c;
}

PolyCurve3 make_circle_curve(double radius, int n, const Point3& center) {
  if (radius <= 0 || n < 3) throw InputError("circle needs radius > 0 and n >= 3");
  PolyCurve3 c;
  c.closed = true;
  c.vertices.reserve(n);
  for (int i = 0; i < n; ++i) {
    double a = 2.0 * kPi * i / n;
    c.vertices.push_back(center + Vec3{radius * std::cos(a), radius * std::sin(a), 0.0});
  }
  return c;
}

PolyCurve3 make_figure_eight_curve(int n) {
  if (n < 60) throw InputError("figure-eight curve needs n >= 60");
  PolyCurve3 c;
  c.closed = true;
  c.vertices.reserve(n);
  for (int i = 0; i < n; ++i) {
    double t = 2.0 * kPi * i / n;
    double w = 2.0 + std::cos(2.0 * t);
    c.vertices.push_back({w * std::cos(3.0 * t), w * std::sin(3.0 * t), std::sin(4.0 * t)});
  }
  validate_polycurve(c);
  return c;
}

namespace {

// Half-ellipse from a to b bulging by `bulge` in direction `out`.
PolyCurve3 make_bridge_arc(const Point3& a, const Point3& b, const Vec3& out, double bulge,
                           int n) {
  Point3 mid = (a + b) * 0.5;
  Vec3 half = a - mid;
  Vec3 h = normalized(out) * bulge;
  PolyCurve3 arc;
  arc.closed = false;
  arc.vertices.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    double u = kPi * i / n;
    arc.vertices.push_back(mid + half * std::cos(u) + h * std::sin(u));
  }
  arc.vertices.front() = a;  // exact attachment
  arc.vertices.back() = b;
  return arc;
}

}  // namespace

void validate_spatial_graph(const SpatialGraph& g) {
  if (g.circles.empty()) throw InputError("spatial graph needs at least one circle");
  for (const auto& c : g.circles) {
    if (!c.closed) throw InputError("graph circles must be closed curves");
    validate_polycurve(c);
  }
  std::vector<Point3> junctions;
  for (const auto& a : g.arcs) {
    if (a.closed) throw InputError("graph arcs must be open curves");
    validate_polycurve(a);
    for (const Point3& end : {a.vertices.front(), a.vertices.back()}) {
      bool attached = false;
      for (const auto& c : g.circles) {
        if (project_to_curve(c, end).distance <= tol_geom) attached = true;
      }
      if (!attached) throw InputError("arc endpoint does not lie on any circle");
      junctions.push_back(end);
    }
  }

  auto near_junction = [&](const Point3& p) {
    for (const auto& j : junctions) {
      if (dist(p, j) <= 1e-6) return true;
    }
    return false;
  };

  // Pairwise disjointness away from declared junctions.
  std::vector<const PolyCurve3*> all;
  for (const auto& c : g.circles) all.push_back(&c);
  for (const auto& a : g.arcs) all.push_back(&a);
  for (size_t i = 0; i < all.size(); ++i) {
    for (size_t j = i + 1; j < all.size(); ++j) {
      const auto& ca = *all[i];
      const auto& cb = *all[j];
      for (int si = 0; si < ca.segment_count(); ++si) {
        for (int sj = 0; sj < cb.segment_count(); ++sj) {
          double d = segment_segment_distance(ca.segment_start(si), ca.segment_end(si),
                                              cb.segment_start(sj), cb.segment_end(sj));
          if (d <= tol_geom) {
            bool exempt = (near_junction(ca.segment_start(si)) || near_junction(ca.segment_end(si))) &&
                          (near_junction(cb.segment_start(sj)) || near_junction(cb.segment_end(sj)));
            if (!exempt) {
              throw GeometryError("graph curves " + std::to_string(i) + " and " +
                                  std::to_string(j) + " touch away from a junction");
            }
          }
        }
      }
    }
  }

  // Connectivity: circles linked by arcs must span everything.
  size_t nc = g.circles.size();
  std::vector<size_t> parent(nc);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& a : g.arcs) {
    int c0 = -1, c1 = -1;
    for (size_t ci = 0; ci < nc; ++ci) {
      if (project_to_curve(g.circles[ci], a.vertices.front()).distance <= tol_geom) c0 = (int)ci;
      if (project_to_curve(g.circles[ci], a.vertices.back()).distance <= tol_geom) c1 = (int)ci;
    }
    if (c0 >= 0 && c1 >= 0) parent[find(c0)] = find(c1);
  }
  for (size_t ci = 1; ci < nc; ++ci) {
    if (find(ci) != find(size_t{0})) throw InputError("spatial graph is not connected");
  }
}

double graph_clearance(const SpatialGraph& g, double junction_exclusion) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : g.circles) best = std::min(best, perpendicular_self_clearance(c));
  for (const auto& a : g.arcs) {
    if (a.segment_count() > 2) best = std::min(best, perpendicular_self_clearance(a));
  }
  std::vector<Point3> junctions;
  for (const auto& a : g.arcs) {
    junctions.push_back(a.vertices.front());
    junctions.push_back(a.vertices.back());
  }
  auto in_weld_region = [&](const Point3& pa, const Point3& pb) {
    for (const auto& j : junctions) {
      if (dist(pa, j) <= junction_exclusion + 1e-9 && dist(pb, j) <= junction_exclusion + 1e-9) {
        return true;
      }
    }
    return false;
  };
  std::vector<const PolyCurve3*> all;
  for (const auto& c : g.circles) all.push_back(&c);
  for (const auto& a : g.arcs) all.push_back(&a);
  for (size_t i = 0; i < all.size(); ++i) {
    for (size_t j = i + 1; j < all.size(); ++j) {
      for (int si = 0; si < all[i]->segment_count(); ++si) {
        for (int sj = 0; sj < all[j]->segment_count(); ++sj) {
          Vec3 cp_a, cp_b;
          double d = segment_segment_closest(all[i]->segment_start(si), all[i]->segment_end(si),
                                             all[j]->segment_start(sj), all[j]->segment_end(sj),
                                             cp_a, cp_b);
          if (in_weld_region(cp_a, cp_b)) continue;
          best = std::min(best, d);
        }
      }
    }
  }
  return best;
}

double suggest_tube_radius(const SpatialGraph& g) {
  double bend = std::numeric_limits<double>::infinity();
  for (const auto& c : g.circles) bend = std::min(bend, min_local_bend_radius(c));
  for (const auto& a : g.arcs) bend = std::min(bend, min_local_bend_radius(a));
  if (g.arcs.empty()) {
    return std::min(0.25 * graph_clearance(g, 0.0), 0.9 * bend);
  }
  // An arc necessarily approaches its host circle at the junctions; the weld
  // owns that zone. Size the zone as a fixed fraction of the shortest curve
  // and cap the radius by it, then take a quarter of what is left.
  double shortest = std::numeric_limits<double>::infinity();
  for (const auto& a : g.arcs) shortest = std::min(shortest, a.length());
  for (const auto& c : g.circles) shortest = std::min(shortest, c.length());
  double zone = 0.25 * shortest;
  return std::min({0.25 * graph_clearance(g, zone), 0.9 * bend, 0.2 * shortest});
}

SpatialGraph make_unknot_with_tunnel(double radius, int n) {
  if (n % 2 != 0) throw InputError("unknot-with-tunnel fixture needs even n");
  SpatialGraph g;
  g.circles.push_back(make_circle_curve(radius, n));
  Point3 a = g.circles[0].vertices[0];
  Point3 b = g.circles[0].vertices[n / 2];
  g.arcs.push_back(make_bridge_arc(a, b, {0, 0, 1}, radius, std::max(16, n / 4)));
  validate_spatial_graph(g);
  return g;
}

SpatialGraph make_dumbbell_graph(double circle_radius, double separation, int n) {
  if (n % 2 != 0) throw InputError("dumbbell fixture needs even n");
  SpatialGraph g;
  double d = circle_radius + separation / 2.0;
  g.circles.push_back(make_circle_curve(circle_radius, n, {-d, 0, 0}));
  g.circles.push_back(make_circle_curve(circle_radius, n, {d, 0, 0}));
  Point3 a = g.circles[0].vertices[0];        // (-separation/2, 0, 0)
  Point3 b = g.circles[1].vertices[n / 2];    // (+separation/2, 0, 0)
  PolyCurve3 arc;
  arc.closed = false;
  int na = std::max(8, n / 8);
  for (int i = 0; i <= na; ++i) {
    double t = static_cast<double>(i) / na;
    arc.vertices.push_back(a + (b - a) * t);
  }
  g.arcs.push_back(arc);
  validate_spatial_graph(g);
  return g;
}

SpatialGraph make_knot_with_eyeglass_tunnel(PolyCurve3 knot, double bulge) {
  validate_polycurve(knot);
  const int n = static_cast<int>(knot.vertices.size());
  // Rotate the vertex list so index 0 is the outermost point; the bridge
  // spans a few vertices to either side of it and bulges radially outward,
  // where the rest of the curve cannot reach.
  int outer = 0;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    double r = std::hypot(knot.vertices[i].x, knot.vertices[i].y);
    if (r > best) {
      best = r;
      outer = i;
    }
  }
  std::rotate(knot.vertices.begin(), knot.vertices.begin() + outer, knot.vertices.end());

  SpatialGraph g;
  g.circles.push_back(std::move(knot));
  const auto& k = g.circles[0].vertices;
  int span = std::max(2, n / 24);
  Point3 a = k[n - span];
  Point3 b = k[span];
  Point3 mid = (a + b) * 0.5;
  Vec3 out = normalized(Vec3{mid.x, mid.y, 0.0});
  g.arcs.push_back(make_bridge_arc(a, b, out, bulge, 24));
  validate_spatial_graph(g);
  return g;
}

SpatialGraph make_figure_eight_with_tunnel(int n) {
  return make_knot_with_eyeglass_tunnel(make_figure_eight_curve(n), 1.6);
}

SpatialGraph make_trefoil_with_tunnel(int n) {
  return make_knot_with_eyeglass_tunnel(make_torus_knot_curve(2, 3, 2.0, 0.8, n), 1.4);
}

}  // namespace ksplit
