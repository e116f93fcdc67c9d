#include "ksplit/linking.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "ksplit/errors.hpp"

namespace ksplit {

namespace {

constexpr double kPi = std::numbers::pi;

void require_closed_disjoint(const PolyCurve3& c1, const PolyCurve3& c2) {
  if (!c1.closed || !c2.closed) throw InputError("linking number requires closed curves");
  if (c1.vertices.size() < 3 || c2.vertices.size() < 3) {
    throw InputError("linking number requires curves with >= 3 vertices");
  }
  double d = curve_curve_distance(c1, c2);
  if (d <= tol_geom) {
    throw InputError("linking number requires disjoint curves (distance " + std::to_string(d) +
                     ")");
  }
}

double cross2(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

struct Projected {
  std::vector<double> x, y, h;  // per vertex
};

Projected project(const PolyCurve3& c, const Vec3& e1, const Vec3& e2, const Vec3& d) {
  Projected p;
  p.x.reserve(c.vertices.size());
  for (const auto& v : c.vertices) {
    p.x.push_back(dot(v, e1));
    p.y.push_back(dot(v, e2));
    p.h.push_back(dot(v, d));
  }
  return p;
}

struct Degenerate {};  // projection direction unusable; redraw

long signed_crossing_sum(const PolyCurve3& c1, const PolyCurve3& c2, const Vec3& d) {
  Vec3 e1 = any_orthonormal(d);
  Vec3 e2 = cross(d, e1);  // (e1, e2, d) right-handed
  Projected p1 = project(c1, e1, e2, d);
  Projected p2 = project(c2, e1, e2, d);
  const int n1 = c1.segment_count(), n2 = c2.segment_count();
  const size_t m1 = c1.vertices.size(), m2 = c2.vertices.size();

  long sum = 0;
  for (int i = 0; i < n1; ++i) {
    const size_t i1 = i, i2 = (i + 1) % m1;
    const double ax = p1.x[i1], ay = p1.y[i1];
    const double dax = p1.x[i2] - ax, day = p1.y[i2] - ay;
    const double la = std::hypot(dax, day);
    for (int j = 0; j < n2; ++j) {
      const size_t j1 = j, j2 = (j + 1) % m2;
      const double bx = p2.x[j1], by = p2.y[j1];
      const double dbx = p2.x[j2] - bx, dby = p2.y[j2] - by;
      const double lb = std::hypot(dbx, dby);

      const double denom = cross2(dax, day, dbx, dby);
      const double rx = bx - ax, ry = by - ay;
      if (std::abs(denom) <= tol_proj * la * lb) {
        // Near-parallel in projection: harmless unless the segments are close.
        double gap = std::min(std::min(std::hypot(rx, ry), std::hypot(p2.x[j2] - ax, p2.y[j2] - ay)),
                              std::min(std::hypot(bx - p1.x[i2], by - p1.y[i2]),
                                       std::hypot(p2.x[j2] - p1.x[i2], p2.y[j2] - p1.y[i2])));
        if (gap <= tol_proj * (la + lb + 1.0)) throw Degenerate{};
        continue;
      }
      const double t = cross2(rx, ry, dbx, dby) / denom;
      const double u = cross2(rx, ry, dax, day) / denom;
      const double margin = tol_proj;
      const bool inside = t > margin && t < 1.0 - margin && u > margin && u < 1.0 - margin;
      const bool outside = t < -margin || t > 1.0 + margin || u < -margin || u > 1.0 + margin;
      if (!inside && !outside) throw Degenerate{};
      if (!inside) continue;

      const double h1 = p1.h[i1] + t * (p1.h[i2] - p1.h[i1]);
      const double h2 = p2.h[j1] + u * (p2.h[j2] - p2.h[j1]);
      if (std::abs(h1 - h2) <= tol_geom) throw Degenerate{};
      // sign(det[t1, t2, x2 - x1]) with x2 - x1 = (h2 - h1) d at the crossing
      sum += ((h2 - h1) * denom > 0.0) ? 1 : -1;
    }
  }
  if (sum % 2 != 0) throw Degenerate{};  // closed curves cross an even number of times
  return sum;
}

}  // namespace

int linking_number_crossings(const PolyCurve3& c1, const PolyCurve3& c2,
                             std::optional<Vec3> direction, std::uint64_t seed) {
  require_closed_disjoint(c1, c2);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
  const int max_attempts = 32;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Vec3 d = (attempt == 0 && direction) ? normalized(*direction) : rng.unit_vector();
    try {
      return static_cast<int>(signed_crossing_sum(c1, c2, d) / 2);
    } catch (const Degenerate&) {
      if (direction && attempt == 0) {
        // caller-specified direction failed; fall through to random retries
      }
      continue;
    }
  }
  throw PrecisionError("no usable projection direction after 32 attempts");
}

namespace {

// van Oosterom & Strackee: signed solid angle of the spherical triangle with
// unit-vector corners (p, q, r).
double triangle_solid_angle(const Vec3& p, const Vec3& q, const Vec3& r) {
  double num = det3(p, q, r);
  double den = 1.0 + dot(p, q) + dot(q, r) + dot(r, p);
  return 2.0 * std::atan2(num, den);
}

}  // namespace

double linking_number_gauss_raw(const PolyCurve3& c1, const PolyCurve3& c2) {
  require_closed_disjoint(c1, c2);
  const int n1 = c1.segment_count(), n2 = c2.segment_count();
  double total = 0.0;
  for (int i = 0; i < n1; ++i) {
    const Vec3 a1 = c1.segment_start(i), a2 = c1.segment_end(i);
    for (int j = 0; j < n2; ++j) {
      const Vec3 b1 = c2.segment_start(j), b2 = c2.segment_end(j);
      // Image of the Gauss map over this parameter square: spherical
      // quadrilateral traced (s,t) = (0,0) -> (1,0) -> (1,1) -> (0,1).
      const Vec3 qa = normalized(b1 - a1);
      const Vec3 qb = normalized(b1 - a2);
      const Vec3 qc = normalized(b2 - a2);
      const Vec3 qd = normalized(b2 - a1);
      total += triangle_solid_angle(qa, qb, qc) + triangle_solid_angle(qa, qc, qd);
    }
  }
  return -total / (4.0 * kPi);
}

int linking_number_gauss(const PolyCurve3& c1, const PolyCurve3& c2) {
  double raw = linking_number_gauss_raw(c1, c2);
  double rounded = std::round(raw);
  if (std::abs(raw - rounded) >= 0.1) {
    throw PrecisionError("Gauss sum " + std::to_string(raw) +
                         " is not within 0.1 of an integer; curves too close or too coarse");
  }
  return static_cast<int>(rounded);
}

int linking_number_checked(const PolyCurve3& c1, const PolyCurve3& c2, std::uint64_t seed) {
  int by_crossings = linking_number_crossings(c1, c2, std::nullopt, seed);
  int by_gauss = linking_number_gauss(c1, c2);
  if (by_crossings != by_gauss) {
    throw EngineMismatchError("linking engines disagree: crossings=" +
                              std::to_string(by_crossings) + " gauss=" + std::to_string(by_gauss));
  }
  return by_gauss;
}

}  // namespace ksplit
