#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace ksplit {

// Coincidence / intersection tolerance, in desk units. One tolerance for
// every geometric predicate so they compose.
inline constexpr double tol_geom = 1e-9;

// Projection degeneracy tolerance for the crossing-count linking engine.
inline constexpr double tol_proj = 1e-7;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
  bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

using Point3 = Vec3;

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }

inline double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline Vec3 normalized(const Vec3& v) {
  double n = norm(v);
  if (n < tol_geom) throw std::domain_error("cannot normalize near-zero vector");
  return v / n;
}

inline bool all_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

// Any unit vector orthogonal to v.
inline Vec3 any_orthonormal(const Vec3& v) {
  Vec3 t = std::abs(v.x) < 0.9 * norm(v) ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  return normalized(cross(v, t));
}

// Closest-point distance between segments [p1,p2] and [q1,q2].
double segment_segment_distance(const Vec3& p1, const Vec3& p2, const Vec3& q1, const Vec3& q2);

// Same, also reporting the closest points on each segment.
double segment_segment_closest(const Vec3& p1, const Vec3& p2, const Vec3& q1, const Vec3& q2,
                               Vec3& on_first, Vec3& on_second);

// Distance from point p to segment [a,b].
double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b);

// Distance from point p to triangle (a,b,c).
double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

// Distance between triangles (0 if they intersect). Exact up to roundoff:
// min over edge/edge and vertex/face pairs, with a proper-crossing test.
double triangle_triangle_distance(const std::array<Vec3, 3>& t1, const std::array<Vec3, 3>& t2);

// All randomness in the library flows through one of these, seeded explicitly,
// so every run is reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  int uniform_int(int lo, int hi) {  // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }
  Vec3 unit_vector() {
    // Marsaglia rejection on the cube keeps the distribution exact.
    for (;;) {
      Vec3 v{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
      double n2 = norm2(v);
      if (n2 > 1e-4 && n2 <= 1.0) return v / std::sqrt(n2);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ksplit
