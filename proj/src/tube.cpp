#include "ksplit/tube.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ksplit/errors.hpp"

namespace ksplit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kArcRadiusFactor = 0.6;  // arc tubes are thinner than circle tubes

Vec3 rotate_about_axis(const Vec3& v, const Vec3& axis_unit, double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  return v * c + cross(axis_unit, v) * s + axis_unit * (dot(axis_unit, v) * (1.0 - c));
}

std::vector<double> cumulative_lengths(const std::vector<Point3>& pts, bool closed) {
  std::vector<double> cum{0.0};
  for (size_t i = 0; i + 1 < pts.size(); ++i) cum.push_back(cum.back() + dist(pts[i], pts[i + 1]));
  if (closed) cum.push_back(cum.back() + dist(pts.back(), pts.front()));
  return cum;
}

Point3 point_at_length(const std::vector<Point3>& pts, bool closed,
                       const std::vector<double>& cum, double target) {
  size_t nseg = cum.size() - 1;
  target = std::clamp(target, 0.0, cum.back());
  size_t lo = std::upper_bound(cum.begin(), cum.end(), target) - cum.begin();
  size_t seg = std::min(lo == 0 ? 0 : lo - 1, nseg - 1);
  double seg_len = cum[seg + 1] - cum[seg];
  double f = seg_len > 0 ? (target - cum[seg]) / seg_len : 0.0;
  Point3 a = pts[seg];
  Point3 b = pts[(seg + 1) % pts.size()];
  (void)closed;
  return a + (b - a) * f;
}

// Uniform-arclength resampling. Closed: n points (implicit wrap); open: n+1.
std::vector<Point3> resample_uniform(const std::vector<Point3>& pts, bool closed, int n) {
  auto cum = cumulative_lengths(pts, closed);
  double total = cum.back();
  std::vector<Point3> out;
  int count = closed ? n : n + 1;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    double target = total * k / n;
    out.push_back(point_at_length(pts, closed, cum, target));
  }
  if (!closed) {
    out.front() = pts.front();
    out.back() = pts.back();
  }
  return out;
}

struct Frames {
  std::vector<Vec3> t, u, w;
  double holonomy = 0.0;
};

// Rotation-minimizing frames: transport the normal with the rotation taking
// each tangent to the next, then spread the closing mismatch uniformly so
// closed charts have no seam.
Frames parallel_transport_frames(const std::vector<Point3>& pts, bool closed) {
  const int n = static_cast<int>(pts.size());
  Frames fr;
  fr.t.resize(n);
  fr.u.resize(n);
  fr.w.resize(n);
  for (int i = 0; i < n; ++i) {
    Vec3 d;
    if (closed) {
      d = pts[(i + 1) % n] - pts[(i + n - 1) % n];
    } else if (i == 0) {
      d = pts[1] - pts[0];
    } else if (i == n - 1) {
      d = pts[n - 1] - pts[n - 2];
    } else {
      d = pts[i + 1] - pts[i - 1];
    }
    fr.t[i] = normalized(d);
  }

  auto transport = [](const Vec3& u_prev, const Vec3& t_prev, const Vec3& t_next) {
    Vec3 axis = cross(t_prev, t_next);
    double s = norm(axis), c = std::clamp(dot(t_prev, t_next), -1.0, 1.0);
    Vec3 u = (s < 1e-14) ? u_prev : rotate_about_axis(u_prev, axis / s, std::atan2(s, c));
    u -= t_next * dot(u, t_next);
    return normalized(u);
  };

  fr.u[0] = any_orthonormal(fr.t[0]);
  for (int i = 1; i < n; ++i) fr.u[i] = transport(fr.u[i - 1], fr.t[i - 1], fr.t[i]);

  if (closed) {
    Vec3 u_loop = transport(fr.u[n - 1], fr.t[n - 1], fr.t[0]);
    Vec3 w0 = cross(fr.u[0], fr.t[0]);
    fr.holonomy = std::atan2(dot(u_loop, w0), dot(u_loop, fr.u[0]));
    for (int i = 0; i < n; ++i) {
      fr.u[i] = rotate_about_axis(fr.u[i], fr.t[i], -fr.holonomy * i / n);
    }
  }
  for (int i = 0; i < n; ++i) fr.w[i] = cross(fr.u[i], fr.t[i]);
  return fr;
}

// Ring vertices for ring r of a swept tube: theta measured from u toward w.
void append_rings(SurfaceMesh& mesh, const std::vector<Point3>& core, const Frames& fr,
                  double radius, int n_circ, std::vector<int>& grid) {
  for (size_t r = 0; r < core.size(); ++r) {
    for (int j = 0; j < n_circ; ++j) {
      double th = 2.0 * kPi * j / n_circ;
      grid.push_back(static_cast<int>(mesh.vertices.size()));
      mesh.vertices.push_back(core[r] + fr.u[r] * (radius * std::cos(th)) +
                              fr.w[r] * (radius * std::sin(th)));
    }
  }
}

void emit_chart_triangles(SurfaceMesh& mesh, const TubeChart& ch) {
  for (int i = 0; i < ch.n_long; ++i) {
    for (int j = 0; j < ch.n_circ; ++j) {
      if (ch.cell_excluded(i, j)) continue;
      int v00 = ch.vertex_id(i, j), v10 = ch.vertex_id(i + 1, j);
      int v11 = ch.vertex_id(i + 1, j + 1), v01 = ch.vertex_id(i, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
}

// Perimeter of a removed cell rectangle, counter-clockwise in (s, theta);
// this is the traversal direction the replacement triangles must follow.
std::vector<int> hole_perimeter_ccw(const TubeChart& ch, int i0, int icount, int j0, int jcount) {
  std::vector<int> cycle;
  for (int k = 0; k < icount; ++k) cycle.push_back(ch.vertex_id(i0 + k, j0));
  for (int k = 0; k < jcount; ++k) cycle.push_back(ch.vertex_id(i0 + icount, j0 + k));
  for (int k = 0; k < icount; ++k) cycle.push_back(ch.vertex_id(i0 + icount - k, j0 + jcount));
  for (int k = 0; k < jcount; ++k) cycle.push_back(ch.vertex_id(i0, j0 + jcount - k));
  return cycle;
}

// Triangulated annulus between two cycles. New triangles traverse cycle A
// forward (a_k -> a_{k+1}) and cycle B backward, so A must be listed in the
// orientation the removed patch had and B opposite to its surviving
// triangles. B is rotated so its start lines up with A's geometrically.
void zip_annulus(SurfaceMesh& mesh, const std::vector<int>& a, std::vector<int> b) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(b.size());
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int r = 0; r < n; ++r) {
    double d = dist(mesh.vertices[b[r]], mesh.vertices[a[0]]);
    if (d < best_d) {
      best_d = d;
      best = r;
    }
  }
  std::rotate(b.begin(), b.begin() + best, b.end());

  int ka = 0, kb = 0;
  while (ka < m || kb < n) {
    bool advance_a;
    if (ka == m) {
      advance_a = false;
    } else if (kb == n) {
      advance_a = true;
    } else {
      advance_a = static_cast<long>(ka + 1) * n <= static_cast<long>(kb + 1) * m;
    }
    if (advance_a) {
      mesh.triangles.push_back({a[ka % m], a[(ka + 1) % m], b[kb % n]});
      ++ka;
    } else {
      mesh.triangles.push_back({a[ka % m], b[(kb + 1) % n], b[kb % n]});
      ++kb;
    }
  }
}

// End ring of a swept tube listed in the traversal direction zip_annulus
// needs for cycle B: decreasing theta at the start ring, increasing at the
// far ring (this matches the orientation of the surviving tube triangles).
std::vector<int> end_ring_cycle(const TubeChart& ch, bool start_ring) {
  std::vector<int> cycle;
  int ring = start_ring ? 0 : ch.n_long;
  if (start_ring) {
    for (int j = ch.n_circ - 1; j >= 0; --j) cycle.push_back(ch.vertex_id(ring, j));
  } else {
    for (int j = 0; j < ch.n_circ; ++j) cycle.push_back(ch.vertex_id(ring, j));
  }
  return cycle;
}

double distance_to_polyline(const Point3& p, const std::vector<Point3>& pts, bool closed) {
  double best = std::numeric_limits<double>::infinity();
  size_t nseg = closed ? pts.size() : pts.size() - 1;
  for (size_t i = 0; i < nseg; ++i) {
    best = std::min(best, point_segment_distance(p, pts[i], pts[(i + 1) % pts.size()]));
  }
  return best;
}

struct TrimResult {
  std::vector<Point3> trimmed;   // sub-polyline between the junction offsets
  Point3 pierce_front, pierce_back;  // where the core meets the host tube walls
};

// Cut the arc back from each junction so its tube starts just outside the
// host circle tubes.
TrimResult trim_arc(const PolyCurve3& arc, const std::vector<Point3>& host_front,
                    const std::vector<Point3>& host_back, double host_radius,
                    double arc_radius) {
  const double stop = host_radius + 0.4 * arc_radius;
  auto walk = [&](bool from_front, const std::vector<Point3>& host, double threshold,
                  Point3& crossing) {
    const auto& v = arc.vertices;
    const int n = static_cast<int>(v.size());
    for (int step = 0; step + 1 < n; ++step) {
      int i = from_front ? step : n - 1 - step;
      int j = from_front ? step + 1 : n - 2 - step;
      double di = distance_to_polyline(v[i], host, true);
      double dj = distance_to_polyline(v[j], host, true);
      if (di < threshold && dj >= threshold) {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 40; ++it) {
          double mid = 0.5 * (lo + hi);
          Point3 p = v[i] + (v[j] - v[i]) * mid;
          (distance_to_polyline(p, host, true) < threshold ? lo : hi) = mid;
        }
        crossing = v[i] + (v[j] - v[i]) * (0.5 * (lo + hi));
        return from_front ? static_cast<double>(i) + 0.5 * (lo + hi)
                          : static_cast<double>(n - 1 - i) + 0.5 * (lo + hi);
      }
    }
    throw GeometryError("tunnel arc never leaves its host tube; arc too short for this radius");
  };

  Point3 front_cross, back_cross, front_pierce, back_pierce;
  double f_param = walk(true, host_front, stop, front_cross);
  double b_param = walk(false, host_back, stop, back_cross);
  walk(true, host_front, host_radius, front_pierce);
  walk(false, host_back, host_radius, back_pierce);

  const auto& v = arc.vertices;
  const int n = static_cast<int>(v.size());
  double back_index = (n - 1) - b_param;
  if (back_index - f_param < 0.5) {
    throw GeometryError("tunnel arc too short once trimmed at both junctions");
  }
  TrimResult out;
  out.trimmed.push_back(front_cross);
  for (int i = static_cast<int>(std::ceil(f_param + 1e-9)); i <= static_cast<int>(back_index); ++i) {
    if (dist(v[i], out.trimmed.back()) > 1e-12) out.trimmed.push_back(v[i]);
  }
  if (dist(back_cross, out.trimmed.back()) > 1e-12) out.trimmed.push_back(back_cross);
  out.pierce_front = front_pierce;
  out.pierce_back = back_pierce;
  return out;
}

// Chart coordinates (cell indices) of a point hovering near a circle tube.
std::pair<int, int> chart_cell_of_point(const SurfaceMesh& mesh, const TubeChart& ch,
                                        const std::vector<Point3>& core, const Point3& p) {
  int best_ring = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int r = 0; r < static_cast<int>(core.size()); ++r) {
    double d = dist(core[r], p);
    if (d < best_d) {
      best_d = d;
      best_ring = r;
    }
  }
  Vec3 d = p - core[best_ring];
  Vec3 u_dir = normalized(mesh.vertices[ch.vertex_id(best_ring, 0)] - core[best_ring]);
  Vec3 w_dir = normalized(mesh.vertices[ch.vertex_id(best_ring, ch.n_circ / 4)] - core[best_ring]);
  double theta = std::atan2(dot(d, w_dir), dot(d, u_dir));
  if (theta < 0) theta += 2.0 * kPi;
  int j = static_cast<int>(std::floor(theta / (2.0 * kPi) * ch.n_circ)) % ch.n_circ;
  return {best_ring, j};
}

}  // namespace

Point3 chart_point(const SurfaceMesh& mesh, const TubeChart& chart, double s, double theta) {
  double su = s - std::floor(s);
  double tu = theta / (2.0 * kPi);
  tu -= std::floor(tu);
  double fi = su * chart.n_long;
  double fj = tu * chart.n_circ;
  if (!chart.closed) fi = std::clamp(s, 0.0, 1.0) * chart.n_long;
  int i = std::min(static_cast<int>(std::floor(fi)), chart.n_long - 1);
  int j = std::min(static_cast<int>(std::floor(fj)), chart.n_circ - 1);
  double f = fi - i, g = fj - j;
  const Point3 va = mesh.vertices[chart.vertex_id(i, j)];
  const Point3 vb = mesh.vertices[chart.vertex_id(i + 1, j)];
  const Point3 vc = mesh.vertices[chart.vertex_id(i + 1, j + 1)];
  const Point3 vd = mesh.vertices[chart.vertex_id(i, j + 1)];
  // The grid cell is split along its (i,j) -> (i+1,j+1) diagonal.
  if (f >= g) return va * (1.0 - f) + vb * (f - g) + vc * g;
  return va * (1.0 - g) + vc * f + vd * (g - f);
}

std::pair<int, int> chart_cell(const TubeChart& chart, double s, double theta) {
  double su = s - std::floor(s);
  double tu = theta / (2.0 * kPi);
  tu -= std::floor(tu);
  double fi = chart.closed ? su * chart.n_long : std::clamp(s, 0.0, 1.0) * chart.n_long;
  int i = std::min(static_cast<int>(std::floor(fi)), chart.n_long - 1);
  int j = std::min(static_cast<int>(std::floor(tu * chart.n_circ)), chart.n_circ - 1);
  return {i, j};
}

std::pair<double, double> chart_scale(const TubeChart& chart) {
  return {chart.core_length, chart.radius};
}

TubeSurface make_tube_surface(const SpatialGraph& graph, double radius, int n_circ,
                              double n_long_per_unit) {
  validate_spatial_graph(graph);
  if (n_circ < 8 || n_circ % 4 != 0) throw InputError("n_circ must be a multiple of 4, >= 8");
  double suggested = suggest_tube_radius(graph);
  if (radius <= 0.0) radius = suggested;
  if (radius > suggested * 1.0001) {
    throw InputError("tube radius " + std::to_string(radius) +
                     " exceeds the admissible default " + std::to_string(suggested) +
                     "; override downward only");
  }

  TubeSurface out;
  std::vector<std::vector<Point3>> circle_cores;

  for (const auto& circle : graph.circles) {
    TubeChart ch;
    ch.id = static_cast<int>(out.charts.size());
    ch.closed = true;
    ch.radius = radius;
    ch.n_circ = n_circ;
    double len = circle.length();
    ch.core_length = len;
    ch.n_long = std::max(12, static_cast<int>(std::lround(len * n_long_per_unit)));
    auto core = resample_uniform(circle.vertices, true, ch.n_long);
    auto fr = parallel_transport_frames(core, true);
    ch.frame_holonomy = fr.holonomy;
    append_rings(out.mesh, core, fr, radius, n_circ, ch.grid);
    circle_cores.push_back(std::move(core));
    out.charts.push_back(std::move(ch));
  }

  struct Weld {
    int arc_chart;
    bool arc_start;
    int circle_chart;
    int i0, icount, j0, jcount;
  };
  std::vector<Weld> welds;

  const double arc_radius = kArcRadiusFactor * radius;
  for (const auto& arc : graph.arcs) {
    auto host_of = [&](const Point3& p) {
      int best = -1;
      double best_d = std::numeric_limits<double>::infinity();
      for (size_t ci = 0; ci < graph.circles.size(); ++ci) {
        double d = project_to_curve(graph.circles[ci], p).distance;
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(ci);
        }
      }
      return best;
    };
    int host_front = host_of(arc.vertices.front());
    int host_back = host_of(arc.vertices.back());

    auto trim = trim_arc(arc, circle_cores[host_front], circle_cores[host_back], radius,
                         arc_radius);

    TubeChart ch;
    ch.id = static_cast<int>(out.charts.size());
    ch.closed = false;
    ch.radius = arc_radius;
    ch.n_circ = n_circ;
    PolyCurve3 trimmed{trim.trimmed, false};
    double len = trimmed.length();
    ch.core_length = len;
    ch.n_long = std::max(6, static_cast<int>(std::lround(len * n_long_per_unit)));
    auto core = resample_uniform(trim.trimmed, false, ch.n_long);
    auto fr = parallel_transport_frames(core, false);
    append_rings(out.mesh, core, fr, arc_radius, n_circ, ch.grid);

    // Plan the two welds: find the pierced cell, then grow the opening until
    // its rim clears the arc tube.
    for (bool front : {true, false}) {
      int host = front ? host_front : host_back;
      const Point3 pierce = front ? trim.pierce_front : trim.pierce_back;
      TubeChart& host_ch = out.charts[host];
      auto [ri, rj] = chart_cell_of_point(out.mesh, host_ch, circle_cores[host], pierce);

      std::vector<Point3> probe;  // arc core from the junction past the trim ring
      {
        const auto& v = arc.vertices;
        const int n = static_cast<int>(v.size());
        Point3 stop_at = front ? core.front() : core.back();
        double reach = radius + 3.0 * arc_radius;
        for (int step = 0; step < n; ++step) {
          int idx = front ? step : n - 1 - step;
          probe.push_back(v[idx]);
          if (dist(v[idx], front ? v[0] : v[n - 1]) > reach) break;
        }
        probe.push_back(stop_at);
      }

      int i0 = ri - 1, icount = 2, j0 = rj - 1, jcount = 2;
      auto rim_clear = [&]() {
        auto cyc = hole_perimeter_ccw(host_ch, i0, icount, j0, jcount);
        double worst = std::numeric_limits<double>::infinity();
        for (int vid : cyc) {
          worst = std::min(worst, distance_to_polyline(out.mesh.vertices[vid], probe, false));
        }
        return worst;
      };
      int guard = 0;
      while (rim_clear() < 1.15 * arc_radius) {
        // grow alternately in both directions
        if (guard % 2 == 0) {
          --i0;
          icount += 2;
        } else {
          --j0;
          jcount += 2;
        }
        if (++guard > 20 || icount > host_ch.n_long - 3 || jcount > host_ch.n_circ - 3) {
          throw GeometryError("junction opening would swallow the host tube; radius too large");
        }
      }
      welds.push_back({ch.id, front, host, i0, icount, j0, jcount});
    }

    out.charts.push_back(std::move(ch));
  }

  // Mark excluded cells, checking distinct welds never overlap.
  for (const auto& w : welds) {
    TubeChart& host = out.charts[w.circle_chart];
    for (int di = 0; di < w.icount; ++di) {
      for (int dj = 0; dj < w.jcount; ++dj) {
        int i = ((w.i0 + di) % host.n_long + host.n_long) % host.n_long;
        int j = ((w.j0 + dj) % host.n_circ + host.n_circ) % host.n_circ;
        if (!host.excluded.insert({i, j}).second) {
          throw GeometryError("junction openings overlap; enlarge the graph or shrink the tube");
        }
      }
    }
  }

  for (const auto& ch : out.charts) emit_chart_triangles(out.mesh, ch);

  for (const auto& w : welds) {
    auto rim = hole_perimeter_ccw(out.charts[w.circle_chart], w.i0, w.icount, w.j0, w.jcount);
    auto ring = end_ring_cycle(out.charts[w.arc_chart], w.arc_start);
    zip_annulus(out.mesh, rim, ring);
  }

  auto report = validate_surface_mesh(out.mesh);

  // genus = 1 - chi(graph); every junction is a graph vertex, every arc and
  // every circle segment between junctions is an edge.
  int expected_genus = 1 + static_cast<int>(graph.arcs.size());
  if (report.genus != expected_genus) {
    throw GeometryError("tube surface genus " + std::to_string(report.genus) +
                        " does not match graph expectation " + std::to_string(expected_genus));
  }
  return out;
}

namespace {

bool cells_share_vertex(const TubeChart& ch, int ra, int ca, int rb, int cb) {
  auto wrap_dist = [](int a, int b, int n, bool wraps) {
    int d = std::abs(a - b);
    return wraps ? std::min(d, n - d) : d;
  };
  return wrap_dist(ra, rb, ch.n_long, ch.closed) <= 1 && wrap_dist(ca, cb, ch.n_circ, true) <= 1;
}

}  // namespace

TubeSurface k_stabilize_geometric(const TubeSurface& surface, const PolyCurve3& knot_on_surface,
                                  double corridor, const StabilizationSite& site) {
  if (site.chart_id < 0 || site.chart_id >= static_cast<int>(surface.charts.size())) {
    throw InputError("stabilization site names a chart that does not exist");
  }
  const TubeChart& ch0 = surface.charts[site.chart_id];
  for (auto [r, c] : {std::pair{site.ring_a, site.circ_a}, {site.ring_b, site.circ_b}}) {
    if (r < 0 || r >= ch0.n_long || c < 0 || c >= ch0.n_circ) {
      throw InputError("stabilization site cell out of range");
    }
  }
  if (cells_share_vertex(ch0, site.ring_a, site.circ_a, site.ring_b, site.circ_b)) {
    throw InputError("stabilization site disks must be disjoint");
  }
  // Neither site cell, nor its ring of neighbors, may be missing already.
  for (auto [r, c] : {std::pair{site.ring_a, site.circ_a}, {site.ring_b, site.circ_b}}) {
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        int rr = r + dr;
        if (!ch0.closed && (rr < 0 || rr >= ch0.n_long)) continue;
        if (ch0.cell_excluded(rr, c + dc)) {
          throw InputError("stabilization site touches a junction opening or earlier handle");
        }
      }
    }
  }

  TubeSurface out = surface;
  TubeChart& ch = out.charts[site.chart_id];
  SurfaceMesh& mesh = out.mesh;

  auto cell_corners = [&](int r, int c) {
    return std::array<int, 4>{ch.vertex_id(r, c), ch.vertex_id(r + 1, c),
                              ch.vertex_id(r + 1, c + 1), ch.vertex_id(r, c + 1)};
  };
  auto cell_center = [&](int r, int c) {
    auto corners = cell_corners(r, c);
    Vec3 sum{0, 0, 0};
    for (int v : corners) sum += mesh.vertices[v];
    return sum / 4.0;
  };
  auto cell_normal = [&](int r, int c) {
    auto k = cell_corners(r, c);
    return normalized(cross(mesh.vertices[k[2]] - mesh.vertices[k[0]],
                            mesh.vertices[k[3]] - mesh.vertices[k[1]]));
  };

  const Point3 center_a = cell_center(site.ring_a, site.circ_a);
  const Point3 center_b = cell_center(site.ring_b, site.circ_b);
  const Vec3 normal_a = cell_normal(site.ring_a, site.circ_a);
  const Vec3 normal_b = cell_normal(site.ring_b, site.circ_b);

  const double cell_w = ch.core_length / ch.n_long;
  const double cell_h = 2.0 * kPi * ch.radius / ch.n_circ;
  const double handle_radius = 0.4 * std::min(cell_w, cell_h);
  const double lift = 1.2 * handle_radius;

  // Handle core: half ellipse arching over the surface between the two disks.
  std::vector<Point3> bridge;
  {
    Point3 pa = center_a + normal_a * lift;
    Point3 pb = center_b + normal_b * lift;
    Point3 mid = (pa + pb) * 0.5;
    Vec3 up = normalized(normal_a + normal_b);
    double bulge = 0.45 * dist(pa, pb) + 2.0 * handle_radius;
    int n_bridge = 16;
    for (int i = 0; i <= n_bridge; ++i) {
      double uang = kPi * i / n_bridge;
      bridge.push_back(mid + (pa - mid) * std::cos(uang) + up * (bulge * std::sin(uang)));
    }
    bridge.front() = pa;
    bridge.back() = pb;
  }

  // The handle and the disks must keep clear of the knot and its pushoffs.
  {
    PolyCurve3 probe{bridge, false};
    double clear = curve_curve_distance(probe, knot_on_surface);
    for (auto [r, c] : {std::pair{site.ring_a, site.circ_a}, {site.ring_b, site.circ_b}}) {
      for (int v : cell_corners(r, c)) {
        clear = std::min(clear, project_to_curve(knot_on_surface, mesh.vertices[v]).distance);
      }
    }
    if (clear <= corridor) {
      throw InputError("stabilization site touches the knot corridor (clearance " +
                       std::to_string(clear) + ")");
    }
  }

  // Open the two disks.
  for (auto [r, c] : {std::pair{site.ring_a, site.circ_a}, {site.ring_b, site.circ_b}}) {
    auto k = cell_corners(r, c);
    auto matches = [&](const Triangle& t, std::array<int, 3> want) {
      std::array<int, 3> have{t.a, t.b, t.c};
      std::sort(have.begin(), have.end());
      std::sort(want.begin(), want.end());
      return have == want;
    };
    int removed = 0;
    for (auto it = mesh.triangles.begin(); it != mesh.triangles.end();) {
      if (matches(*it, {k[0], k[1], k[2]}) || matches(*it, {k[0], k[2], k[3]})) {
        it = mesh.triangles.erase(it);
        ++removed;
      } else {
        ++it;
      }
    }
    if (removed != 2) throw GeometryError("stabilization site cell is not intact");
    ch.excluded.insert({r, c});
  }

  // Sweep the handle tube and weld both ends.
  TubeChart handle;  // local bookkeeping only; the handle is not charted
  handle.closed = false;
  handle.radius = handle_radius;
  handle.n_circ = 8;
  handle.n_long = static_cast<int>(bridge.size()) - 1;
  auto fr = parallel_transport_frames(bridge, false);
  append_rings(mesh, bridge, fr, handle_radius, handle.n_circ, handle.grid);
  emit_chart_triangles(mesh, handle);

  auto rim_a = hole_perimeter_ccw(ch, site.ring_a, 1, site.circ_a, 1);
  auto rim_b = hole_perimeter_ccw(ch, site.ring_b, 1, site.circ_b, 1);
  zip_annulus(mesh, rim_a, end_ring_cycle(handle, true));
  zip_annulus(mesh, rim_b, end_ring_cycle(handle, false));

  validate_surface_mesh(mesh);
  return out;
}

StabilizationSite find_stabilization_site(const TubeSurface& surface,
                                          const PolyCurve3& knot_on_surface, double corridor,
                                          Rng& rng) {
  for (int attempt = 0; attempt < 400; ++attempt) {
    StabilizationSite site;
    site.chart_id = rng.uniform_int(0, static_cast<int>(surface.charts.size()) - 1);
    const TubeChart& ch = surface.charts[site.chart_id];
    site.ring_a = rng.uniform_int(0, ch.n_long - 1);
    site.circ_a = rng.uniform_int(0, ch.n_circ - 1);
    int dr = rng.uniform_int(2, 3) * (rng.uniform_int(0, 1) ? 1 : -1);
    int dc = rng.uniform_int(0, 2) * (rng.uniform_int(0, 1) ? 1 : -1);
    site.ring_b = ch.closed ? (site.ring_a + dr % ch.n_long + ch.n_long) % ch.n_long
                            : site.ring_a + dr;
    site.circ_b = ((site.circ_a + dc) % ch.n_circ + ch.n_circ) % ch.n_circ;
    try {
      k_stabilize_geometric(surface, knot_on_surface, corridor, site);
      return site;
    } catch (const Error&) {
      continue;
    }
  }
  throw GeometryError("no admissible stabilization site found in 400 attempts");
}

}  // namespace ksplit
