#include <cmath>

#include "doctest.h"
#include "ksplit/curve.hpp"
#include "ksplit/errors.hpp"

using namespace ksplit;

TEST_CASE("torus knot curve generator") {
  auto longitude = make_torus_knot_curve(1, 0, 2.0, 0.5, 64);
  CHECK(longitude.closed);
  CHECK(longitude.vertices.size() == 64);
  for (const auto& v : longitude.vertices) CHECK(v.z == doctest::Approx(0.0));

  auto trefoil = make_torus_knot_curve(2, 3, 2.0, 0.5, 240);
  CHECK(trefoil.vertices.size() == 240);
  CHECK_NOTHROW(validate_polycurve(trefoil));

  CHECK_THROWS_AS(make_torus_knot_curve(2, 2, 2.0, 0.5, 240), InputError);
  CHECK_THROWS_AS(make_torus_knot_curve(2, 3, 0.5, 2.0, 240), InputError);
  CHECK_THROWS_AS(make_torus_knot_curve(2, 3, 2.0, 0.5, 12), InputError);
}

TEST_CASE("simplicity check names the offending pair") {
  PolyCurve3 pinched;
  pinched.closed = true;
  pinched.vertices = {{0, 0, 0}, {2, 0, 0}, {2, 1, 0}, {0, -1, 0}, {0, 1, 0}, {2, -1, 0}};
  try {
    validate_polycurve(pinched);
    FAIL("expected a simplicity failure");
  } catch (const GeometryError& e) {
    CHECK(std::string(e.what()).find("segments") != std::string::npos);
  }
}

TEST_CASE("subdivision doubles segments and keeps length") {
  auto c = make_torus_knot_curve(2, 3, 2.0, 0.5, 120);
  auto s = subdivide_midpoints(c);
  CHECK(s.vertices.size() == 2 * c.vertices.size());
  CHECK(s.length() == doctest::Approx(c.length()));
}

TEST_CASE("spatial graph fixtures validate") {
  auto g1 = make_unknot_with_tunnel(2.0, 64);
  CHECK(g1.circles.size() == 1);
  CHECK(g1.arcs.size() == 1);
  CHECK(graph_clearance(g1, 0.5) > 0.3);

  auto g2 = make_dumbbell_graph(1.0, 2.0, 48);
  CHECK(g2.circles.size() == 2);
  CHECK(graph_clearance(g2, 0.5) > 0.3);

  auto g3 = make_figure_eight_with_tunnel(240);
  CHECK(g3.circles.size() == 1);
  CHECK(g3.arcs.size() == 1);
  CHECK(graph_clearance(g3, 0.5) > 0.2);
}

TEST_CASE("disconnected graph is rejected") {
  SpatialGraph g;
  g.circles.push_back(make_circle_curve(1.0, 24, {0, 0, 0}));
  g.circles.push_back(make_circle_curve(1.0, 24, {5, 0, 0}));
  CHECK_THROWS_AS(validate_spatial_graph(g), InputError);
}
