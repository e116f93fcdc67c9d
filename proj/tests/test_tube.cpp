#include <cmath>

#include "doctest.h"
#include "ksplit/errors.hpp"
#include "ksplit/surface_curve.hpp"
#include "ksplit/tube.hpp"

using namespace ksplit;

namespace {

SpatialGraph bare_unknot(double radius = 2.0, int n = 64) {
  SpatialGraph g;
  g.circles.push_back(make_circle_curve(radius, n));
  return g;
}

}  // namespace

TEST_CASE("unknot tube is a valid torus") {
  auto surf = make_tube_surface(bare_unknot(), 0.5);
  auto report = validate_surface_mesh(surf.mesh);
  CHECK(report.genus == 1);
  CHECK(report.euler == 0);
  CHECK(surf.charts.size() == 1);
  CHECK(surf.charts[0].closed);
  CHECK(std::abs(surf.charts[0].frame_holonomy) < 1e-9);  // planar circle transports cleanly
}

TEST_CASE("chart points land on the mesh") {
  auto surf = make_tube_surface(bare_unknot(), 0.5);
  const auto& ch = surf.charts[0];
  // Grid corners map to grid vertices.
  Point3 corner = chart_point(surf.mesh, ch, 1.0 / ch.n_long, 2.0 * M_PI / ch.n_circ);
  CHECK(dist(corner, surf.mesh.vertices[ch.vertex_id(1, 1)]) < 1e-12);
  // A generic point stays within the tube shell.
  Point3 p = chart_point(surf.mesh, ch, 0.123, 1.234);
  double ring_dist = std::abs(std::hypot(p.x, p.y) - 2.0);
  CHECK(ring_dist < 0.5 + 1e-9);
}

TEST_CASE("unknot with tunnel arc gives genus 2") {
  auto g = make_unknot_with_tunnel(2.0, 64);
  auto surf = make_tube_surface(g, 0.3);
  auto report = validate_surface_mesh(surf.mesh);
  CHECK(report.genus == 2);
  CHECK(surf.charts.size() == 2);
  CHECK(!surf.charts[1].closed);
  CHECK(!surf.charts[0].excluded.empty());  // two junction openings
}

TEST_CASE("dumbbell gives genus 2 via chi") {
  auto g = make_dumbbell_graph(1.0, 2.0, 48);
  auto surf = make_tube_surface(g, 0.12);
  auto report = validate_surface_mesh(surf.mesh);
  CHECK(report.euler == -2);
  CHECK(report.genus == 2);
  CHECK(surf.charts.size() == 3);
}

TEST_CASE("figure-eight with tunnel gives genus 2") {
  auto g = make_figure_eight_with_tunnel(200);
  double r = suggest_tube_radius(g);
  auto surf = make_tube_surface(g, 0.8 * r);
  auto report = validate_surface_mesh(surf.mesh);
  CHECK(report.genus == 2);
}

TEST_CASE("weld machinery works across discretizations") {
  auto g = make_unknot_with_tunnel(2.0, 64);
  for (int n_circ : {8, 12, 20}) {
    CAPTURE(n_circ);
    auto surf = make_tube_surface(g, 0.3, n_circ, 6.0);
    CHECK(validate_surface_mesh(surf.mesh).genus == 2);
  }
}

TEST_CASE("oversized radius is rejected with the admissible default") {
  auto g = bare_unknot();
  double suggested = suggest_tube_radius(g);
  CHECK_THROWS_AS(make_tube_surface(g, suggested * 2.0), InputError);
}

TEST_CASE("geometric stabilization adds a handle away from the knot") {
  auto surf = make_tube_surface(bare_unknot(), 0.5);
  auto knot = make_longitude_curve(surf, 0, 0);
  int chi_before = euler_characteristic(surf.mesh);

  Rng rng(7);
  auto site = find_stabilization_site(surf, knot.points, 0.2, rng);
  auto stabbed = k_stabilize_geometric(surf, knot.points, 0.2, site);
  auto report = validate_surface_mesh(stabbed.mesh);
  CHECK(report.genus == 2);
  CHECK(euler_characteristic(stabbed.mesh) == chi_before - 2);

  // The knot still lies on the stabilized surface: its chart is untouched.
  for (const auto& v : knot.points.vertices) {
    Point3 p = v;
    double best = 1e300;
    for (const auto& t : stabbed.mesh.triangles) {
      best = std::min(best, point_triangle_distance(p, stabbed.mesh.vertices[t.a],
                                                    stabbed.mesh.vertices[t.b],
                                                    stabbed.mesh.vertices[t.c]));
      if (best < 1e-9) break;
    }
    CHECK(best < 1e-9);
  }
}

TEST_CASE("stabilization site on the knot is rejected") {
  auto surf = make_tube_surface(bare_unknot(), 0.5);
  auto knot = make_longitude_curve(surf, 0, 0);
  // The mid-cell longitude runs through circ cell 0; plant the handle there.
  StabilizationSite site;
  site.chart_id = 0;
  site.ring_a = 2;
  site.circ_a = 0;
  site.ring_b = 6;
  site.circ_b = 0;
  CHECK_THROWS_AS(k_stabilize_geometric(surf, knot.points, 0.1, site), InputError);
}
