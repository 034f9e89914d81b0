#pragma once

#include <cmath>

namespace hmlab {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3 operator*(Vec3 a, double s) { return s * a; }
inline Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
inline Vec3& operator+=(Vec3& a, Vec3 b) { a = a + b; return a; }
inline Vec3& operator-=(Vec3& a, Vec3 b) { a = a - b; return a; }

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(Vec3 a) { return dot(a, a); }
inline double norm(Vec3 a) { return std::sqrt(norm2(a)); }
inline Vec3 normalized(Vec3 a) {
  const double n = norm(a);
  return {a.x / n, a.y / n, a.z / n};
}

// Bitwise equality; used to propagate exact copies through compositions.
inline bool same_bits(Vec3 a, Vec3 b) { return a.x == b.x && a.y == b.y && a.z == b.z; }

// det [a b c] = a . (b x c)
inline double det3(Vec3 a, Vec3 b, Vec3 c) { return dot(a, cross(b, c)); }

// Angle between unit vectors, robust near 0 and pi.
inline double unit_angle(Vec3 a, Vec3 b) { return std::atan2(norm(cross(a, b)), dot(a, b)); }

// Signed solid angle of the (planar) triangle (a,b,c) seen from the origin.
// For unit vectors this is the signed spherical triangle area.
inline double signed_spherical_area(Vec3 a, Vec3 b, Vec3 c) {
  const double num = det3(a, b, c);
  const double den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
  return 2.0 * std::atan2(num, den);
}

// Geodesic interpolation on S^2. Exact copy of `a` at t=0 / equal endpoints.
// Antipodal endpoints take a deterministic perpendicular detour.
Vec3 slerp(Vec3 a, Vec3 b, double t);

// Deterministic unit vector orthogonal to the unit vector a.
Vec3 any_orthogonal(Vec3 a);

// Clamped cubic smoothstep on [0,1].
inline double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * (3.0 - 2.0 * t);
}

}  // namespace hmlab
