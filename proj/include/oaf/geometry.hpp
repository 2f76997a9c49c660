#pragma once

#include <array>
#include <cmath>

#include "oaf/errors.hpp"

namespace oaf {

// Tolerances shared across the geometric layer.
inline constexpr double kOrthoTol = 1e-9;      // orthonormality / alignment checks
inline constexpr double kDirectionTol = 1e-6;  // degenerate-direction threshold

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    const double n = norm();
    return {x / n, y / n, z / n};
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// 3x3 rotation matrix, row-major storage.
struct Rotation3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Rotation3 identity() { return {}; }

  double operator()(int r, int c) const { return m[3 * r + c]; }
  double& operator()(int r, int c) { return m[3 * r + c]; }

  Vec3 col(int c) const { return {m[c], m[3 + c], m[6 + c]}; }
  Vec3 row(int r) const { return {m[3 * r], m[3 * r + 1], m[3 * r + 2]}; }

  Vec3 operator*(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }

  Rotation3 operator*(const Rotation3& o) const {
    Rotation3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j) + (*this)(i, 2) * o(2, j);
    return r;
  }

  Rotation3 transpose() const {
    Rotation3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
  }

  double det() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
  }

  // Frobenius norm of R^T R - I; zero for an exact rotation.
  double orthonormality_error() const {
    const Rotation3 g = transpose() * (*this);
    double e = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double d = g(i, j) - (i == j ? 1.0 : 0.0);
        e += d * d;
      }
    return std::sqrt(e);
  }

  // Rodrigues formula; axis must be unit length.
  static Rotation3 from_axis_angle(const Vec3& axis, double angle) {
    const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    const double x = axis.x, y = axis.y, z = axis.z;
    Rotation3 r;
    r.m = {t * x * x + c,     t * x * y - s * z, t * x * z + s * y,
           t * x * y + s * z, t * y * y + c,     t * y * z - s * x,
           t * x * z - s * y, t * y * z + s * x, t * z * z + c};
    return r;
  }

  static Rotation3 about_z(double angle) { return from_axis_angle({0, 0, 1}, angle); }
  static Rotation3 about_y(double angle) { return from_axis_angle({0, 1, 0}, angle); }
  static Rotation3 about_x(double angle) { return from_axis_angle({1, 0, 0}, angle); }
};

// Rotation angle in [0, pi] from the matrix trace.
inline double rotation_angle(const Rotation3& r) {
  double c = (r.m[0] + r.m[4] + r.m[8] - 1.0) * 0.5;
  c = c > 1.0 ? 1.0 : (c < -1.0 ? -1.0 : c);
  return std::acos(c);
}

// Geodesic distance between two rotations.
inline double rotation_distance(const Rotation3& a, const Rotation3& b) {
  return rotation_angle(a.transpose() * b);
}

// Rigid transform: x_world = rotation * x_local + translation.
struct Pose {
  Rotation3 rotation;
  Vec3 translation;

  static Pose identity() { return {}; }
  static Pose from_translation(const Vec3& t) { return {Rotation3::identity(), t}; }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

// a then-applied-after b: (a*b).apply(x) == a.apply(b.apply(x)).
inline Pose compose(const Pose& a, const Pose& b) {
  return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

inline Pose inverse(const Pose& p) {
  const Rotation3 rt = p.rotation.transpose();
  return {rt, -(rt * p.translation)};
}

// Flat wire layout: 9 rotation entries row-major, then translation.
using PoseFlat = std::array<double, 12>;

inline PoseFlat pose_to_flat(const Pose& p) {
  PoseFlat f{};
  for (int i = 0; i < 9; ++i) f[i] = p.rotation.m[i];
  f[9] = p.translation.x;
  f[10] = p.translation.y;
  f[11] = p.translation.z;
  return f;
}

inline Pose pose_from_flat(const PoseFlat& f) {
  Pose p;
  for (int i = 0; i < 9; ++i) p.rotation.m[i] = f[i];
  p.translation = {f[9], f[10], f[11]};
  return p;
}

// First two matrix columns, column-major order.
using Rot6d = std::array<double, 6>;

inline Rot6d rot_to_6d(const Rotation3& r) {
  return {r.m[0], r.m[3], r.m[6], r.m[1], r.m[4], r.m[7]};
}

// Gram-Schmidt decoder. Throws DegenerateInput when the first vector
// vanishes or the two vectors are parallel.
inline Rotation3 rot_from_6d(const Rot6d& v) {
  const Vec3 a1{v[0], v[1], v[2]};
  const Vec3 a2{v[3], v[4], v[5]};
  const double n1 = a1.norm();
  if (n1 <= kOrthoTol) throw DegenerateInput("rot_from_6d: first column has zero norm");
  const Vec3 b1 = a1 * (1.0 / n1);
  const Vec3 u2 = a2 - b1 * b1.dot(a2);
  const double n2 = u2.norm();
  if (n2 <= kOrthoTol) throw DegenerateInput("rot_from_6d: columns are parallel");
  const Vec3 b2 = u2 * (1.0 / n2);
  const Vec3 b3 = b1.cross(b2);
  Rotation3 r;
  r.m = {b1.x, b2.x, b3.x, b1.y, b2.y, b3.y, b1.z, b2.z, b3.z};
  return r;
}

// Snaps a near-rotation back onto SO(3) via the 6D codec's Gram-Schmidt.
// Keeps long composition chains from drifting off the manifold.
inline Rotation3 orthonormalized(const Rotation3& r) { return rot_from_6d(rot_to_6d(r)); }

namespace detail {

// Any unit vector orthogonal to v; deterministic choice.
inline Vec3 orthogonal_unit(const Vec3& v) {
  Vec3 a = v.cross({0, 0, 1});
  if (a.norm() <= kOrthoTol) a = v.cross({0, 1, 0});
  return a.normalized();
}

}  // namespace detail

// Minimal rotation taking v_funnel/|v_funnel| onto the direction from
// p_afford to p_tool. Built from the cross/dot products via the Rodrigues
// form R = I + sin(t) K + (1 - cos(t)) K^2 with K the unit-axis skew matrix.
// Degenerate branches: identity when already aligned; a 180-degree flip
// about a deterministic orthogonal axis when anti-aligned.
inline Rotation3 align_rotation(const Vec3& p_tool, const Vec3& p_afford, const Vec3& v_funnel) {
  const Vec3 d = p_tool - p_afford;
  if (d.norm() <= kDirectionTol)
    throw DegenerateDirection("align_rotation: tool and affordance origins coincide");
  if (v_funnel.norm() <= kDirectionTol)
    throw DegenerateDirection("align_rotation: funnel vector has zero norm");

  const Vec3 v = v_funnel.normalized();
  const Vec3 dn = d.normalized();
  const Vec3 r = v.cross(dn);
  const double sin_t = r.norm();
  const double cos_t = v.dot(dn);

  if (sin_t < kOrthoTol) {
    if (cos_t > 0.0) return Rotation3::identity();
    return Rotation3::from_axis_angle(detail::orthogonal_unit(v), M_PI);
  }

  const Vec3 axis = r * (1.0 / sin_t);
  const double x = axis.x, y = axis.y, z = axis.z;
  // K and K^2 expanded in place.
  Rotation3 rot;
  rot.m = {1.0 + (1.0 - cos_t) * (-z * z - y * y),
           -sin_t * z + (1.0 - cos_t) * x * y,
           sin_t * y + (1.0 - cos_t) * x * z,
           sin_t * z + (1.0 - cos_t) * x * y,
           1.0 + (1.0 - cos_t) * (-z * z - x * x),
           -sin_t * x + (1.0 - cos_t) * y * z,
           -sin_t * y + (1.0 - cos_t) * x * z,
           sin_t * x + (1.0 - cos_t) * y * z,
           1.0 + (1.0 - cos_t) * (-y * y - x * x)};
  return rot;
}

}  // namespace oaf
