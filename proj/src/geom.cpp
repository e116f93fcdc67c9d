#include "ksplit/geom.hpp"

#include <algorithm>

namespace ksplit {

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double len2 = norm2(ab);
  if (len2 == 0.0) return dist(p, a);
  double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return dist(p, a + ab * t);
}

double segment_segment_closest(const Vec3& p1, const Vec3& p2, const Vec3& q1, const Vec3& q2,
                               Vec3& on_first, Vec3& on_second) {
  // Ericson, Real-Time Collision Detection, closest point on two segments.
  Vec3 d1 = p2 - p1, d2 = q2 - q1, r = p1 - q1;
  double a = norm2(d1), e = norm2(d2), f = dot(d2, r);
  double s = 0.0, t = 0.0;
  if (a <= 1e-300 && e <= 1e-300) {
    on_first = p1;
    on_second = q1;
    return norm(r);
  }
  if (a <= 1e-300) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    double c = dot(d1, r);
    if (e <= 1e-300) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      double b = dot(d1, d2);
      double denom = a * e - b * b;
      if (denom > 1e-300) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  on_first = p1 + d1 * s;
  on_second = q1 + d2 * t;
  return dist(on_first, on_second);
}

double segment_segment_distance(const Vec3& p1, const Vec3& p2, const Vec3& q1, const Vec3& q2) {
  Vec3 a, b;
  return segment_segment_closest(p1, p2, q1, q2, a, b);
}

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Project into the triangle plane; fall back to edges when outside.
  Vec3 ab = b - a, ac = c - a, ap = p - a;
  double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return dist(p, a);

  Vec3 bp = p - b;
  double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return dist(p, b);

  Vec3 cp = p - c;
  double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return dist(p, c);

  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    double v = d1 / (d1 - d3);
    return dist(p, a + ab * v);
  }
  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    double w = d2 / (d2 - d6);
    return dist(p, a + ac * w);
  }
  double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return dist(p, b + (c - b) * w);
  }
  double denom = 1.0 / (va + vb + vc);
  double v = vb * denom, w = vc * denom;
  return dist(p, a + ab * v + ac * w);
}

namespace {

// Does segment [p,q] properly cross triangle (a,b,c)?
bool segment_crosses_triangle(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b,
                              const Vec3& c) {
  Vec3 n = cross(b - a, c - a);
  double dp = dot(p - a, n), dq = dot(q - a, n);
  if (dp * dq > 0.0) return false;  // same side of the plane
  double denom = dp - dq;
  if (std::abs(denom) < 1e-300) return false;  // coplanar; edge distances cover this
  double t = dp / denom;
  Vec3 x = p + (q - p) * t;
  // Barycentric containment.
  Vec3 v0 = b - a, v1 = c - a, v2 = x - a;
  double d00 = dot(v0, v0), d01 = dot(v0, v1), d11 = dot(v1, v1);
  double d20 = dot(v2, v0), d21 = dot(v2, v1);
  double den = d00 * d11 - d01 * d01;
  if (std::abs(den) < 1e-300) return false;
  double v = (d11 * d20 - d01 * d21) / den;
  double w = (d00 * d21 - d01 * d20) / den;
  return v >= 0.0 && w >= 0.0 && v + w <= 1.0;
}

}  // namespace

double triangle_triangle_distance(const std::array<Vec3, 3>& t1, const std::array<Vec3, 3>& t2) {
  for (int i = 0; i < 3; ++i) {
    if (segment_crosses_triangle(t1[i], t1[(i + 1) % 3], t2[0], t2[1], t2[2])) return 0.0;
    if (segment_crosses_triangle(t2[i], t2[(i + 1) % 3], t1[0], t1[1], t1[2])) return 0.0;
  }
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      best = std::min(best, segment_segment_distance(t1[i], t1[(i + 1) % 3], t2[j],
                                                     t2[(j + 1) % 3]));
    }
    best = std::min(best, point_triangle_distance(t1[i], t2[0], t2[1], t2[2]));
    best = std::min(best, point_triangle_distance(t2[i], t1[0], t1[1], t1[2]));
  }
  return best;
}

}  // namespace ksplit
