#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ksplit/curve.hpp"
#include "ksplit/errors.hpp"
#include "ksplit/linking.hpp"

using namespace ksplit;

namespace {

constexpr double kPi = std::numbers::pi;

PolyCurve3 circle_in_plane(const Point3& center, const Vec3& u, const Vec3& v, double r, int n) {
  PolyCurve3 c;
  c.closed = true;
  for (int i = 0; i < n; ++i) {
    double a = 2.0 * kPi * i / n;
    c.vertices.push_back(center + u * (r * std::cos(a)) + v * (r * std::sin(a)));
  }
  return c;
}

// A (p,q) torus curve offset by a constant meridian phase: two such curves
// with different phases are parallel copies on the same torus.
PolyCurve3 torus_curve_phase(int p, int q, double R, double r, int n, double phase) {
  PolyCurve3 c;
  c.closed = true;
  for (int i = 0; i < n; ++i) {
    double t = 2.0 * kPi * i / n;
    double w = R + r * std::cos(q * t + phase);
    c.vertices.push_back({w * std::cos(p * t), w * std::sin(p * t), r * std::sin(q * t + phase)});
  }
  return c;
}

}  // namespace

TEST_CASE("distant circles do not link") {
  auto c1 = circle_in_plane({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 1.0, 32);
  auto c2 = circle_in_plane({0, 0, 10}, {1, 0, 0}, {0, 1, 0}, 1.0, 32);
  CHECK(linking_number_crossings(c1, c2) == 0);
  CHECK(linking_number_gauss(c1, c2) == 0);
  CHECK(std::abs(linking_number_gauss_raw(c1, c2)) < 1e-6);
}

TEST_CASE("Hopf configuration links once") {
  auto c1 = circle_in_plane({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 1.0, 48);
  auto c2 = circle_in_plane({1, 0, 0}, {1, 0, 0}, {0, 0, 1}, 1.0, 48);
  int a = linking_number_crossings(c1, c2);
  int b = linking_number_gauss(c1, c2);
  CHECK(a == b);
  CHECK(std::abs(a) == 1);
}

TEST_CASE("parallel torus curves link pq") {
  for (auto [p, q] : {std::pair{1, 1}, {2, 3}, {3, 2}, {2, 5}}) {
    int n = 60 * (p + q);
    auto c1 = torus_curve_phase(p, q, 2.0, 0.5, n, 0.0);
    auto c2 = torus_curve_phase(p, q, 2.0, 0.5, n, 0.9);
    CAPTURE(p);
    CAPTURE(q);
    CHECK(linking_number_crossings(c1, c2) == p * q);
    CHECK(linking_number_gauss(c1, c2) == p * q);
  }
}

TEST_CASE("engine symmetry and subdivision invariance") {
  auto c1 = torus_curve_phase(2, 3, 2.0, 0.5, 200, 0.0);
  auto c2 = torus_curve_phase(2, 3, 2.0, 0.5, 200, 1.2);
  int base = linking_number_checked(c1, c2);
  CHECK(linking_number_checked(c2, c1) == base);
  CHECK(linking_number_checked(subdivide_midpoints(c1), c2) == base);
  CHECK(linking_number_checked(c1, subdivide_midpoints(c2)) == base);
}

TEST_CASE("randomized links: symmetry, agreement, invariance under jitter") {
  int tested = 0;
  for (std::uint64_t seed = 1; tested < 40 && seed < 400; ++seed) {
    Rng rng(seed);
    // Random smooth loops from low-order trig sums, rejected unless clearly disjoint.
    auto random_loop = [&](double shift) {
      PolyCurve3 c;
      c.closed = true;
      double a1 = rng.uniform(0.5, 1.5), b1 = rng.uniform(0.5, 1.5);
      double a2 = rng.uniform(-0.5, 0.5), b2 = rng.uniform(-0.5, 0.5);
      Vec3 off{rng.uniform(-1, 1), rng.uniform(-1, 1), shift};
      for (int i = 0; i < 36; ++i) {
        double t = 2.0 * kPi * i / 36;
        c.vertices.push_back(off + Vec3{a1 * std::cos(t) + a2 * std::cos(2 * t),
                                        b1 * std::sin(t) + b2 * std::sin(2 * t),
                                        0.3 * std::sin(2 * t + a2)});
      }
      return c;
    };
    PolyCurve3 c1 = random_loop(0.0);
    PolyCurve3 c2 = random_loop(rng.uniform(-0.8, 0.8));
    if (curve_curve_distance(c1, c2) < 0.05) continue;
    if (min_self_clearance(c1) < 0.05 || min_self_clearance(c2) < 0.05) continue;
    ++tested;
    int a = linking_number_crossings(c1, c2, std::nullopt, seed);
    int b = linking_number_gauss(c1, c2);
    CHECK(a == b);
    CHECK(linking_number_crossings(c2, c1, std::nullopt, seed) == a);
  }
  CHECK(tested >= 20);
}

TEST_CASE("caller-specified projection directions") {
  auto c1 = circle_in_plane({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 1.0, 48);
  auto c2 = circle_in_plane({1, 0, 0}, {1, 0, 0}, {0, 0, 1}, 1.0, 48);
  int base = linking_number_crossings(c1, c2);
  // a generic direction agrees with the auto choice
  CHECK(linking_number_crossings(c1, c2, Vec3{1, 2, 3}) == base);
  // a degenerate direction (c2 projects to a segment) falls back to retries
  CHECK(linking_number_crossings(c1, c2, Vec3{0, 0, 1}) == base);
}

TEST_CASE("linking is constant under jitter isotopies of a fixed link") {
  auto c1 = circle_in_plane({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 1.0, 40);
  auto c2 = circle_in_plane({1, 0, 0}, {1, 0, 0}, {0, 0, 1}, 1.0, 40);
  int base = linking_number_checked(c1, c2);
  CHECK(std::abs(base) == 1);
  Rng rng(77);
  for (int trial = 0; trial < 12; ++trial) {
    PolyCurve3 j1 = c1, j2 = c2;
    for (auto& v : j1.vertices) {
      v += Vec3{rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)};
    }
    for (auto& v : j2.vertices) {
      v += Vec3{rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)};
    }
    if (curve_curve_distance(j1, j2) < 0.05) continue;  // jitter must preserve disjointness
    CHECK(linking_number_checked(j1, j2, trial) == base);
  }
}

TEST_CASE("open or touching curves are rejected") {
  auto c1 = circle_in_plane({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 1.0, 16);
  PolyCurve3 open_curve = c1;
  open_curve.closed = false;
  CHECK_THROWS_AS(linking_number_gauss(open_curve, c1), InputError);
  CHECK_THROWS_AS(linking_number_crossings(c1, c1), InputError);
}
