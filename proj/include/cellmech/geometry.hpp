#pragma once

#include <array>
#include <cmath>

namespace cellmech {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](int i) { return (&x)[i]; }
  double operator[](int i) const { return (&x)[i]; }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

// Signed volume of tet (a,b,c,d); positive when (b-a, c-a, d-a) is right-handed.
inline double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return dot(cross(b - a, c - a), d - a) / 6.0;
}

inline double tri_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * norm(cross(b - a, c - a));
}

// Unit normal of triangle (a,b,c) by the right-hand rule on its vertex order.
inline Vec3 tri_normal(const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec3 n = cross(b - a, c - a);
  double len = norm(n);
  return {n.x / len, n.y / len, n.z / len};
}

// Gradients of the four P1 basis functions on a tet; returns the signed volume.
// grad[i] is constant over the element and satisfies grad(lambda_i).
inline double tet_p1_gradients(const std::array<Vec3, 4>& p, std::array<Vec3, 4>& grad) {
  Vec3 e1 = p[1] - p[0], e2 = p[2] - p[0], e3 = p[3] - p[0];
  double vol6 = dot(cross(e1, e2), e3);
  // grad(lambda_i) = (opposite face normal scaled) / (6 V)
  grad[1] = cross(e2, e3) * (1.0 / vol6);
  grad[2] = cross(e3, e1) * (1.0 / vol6);
  grad[3] = cross(e1, e2) * (1.0 / vol6);
  grad[0] = {-grad[1].x - grad[2].x - grad[3].x, -grad[1].y - grad[2].y - grad[3].y,
             -grad[1].z - grad[2].z - grad[3].z};
  return vol6 / 6.0;
}

// In-plane (tangential) gradients of the three P1 basis functions on a triangle in 3D;
// returns the area. grad[i] lies in the triangle plane.
inline double tri_p1_gradients(const std::array<Vec3, 3>& p, std::array<Vec3, 3>& grad) {
  Vec3 e1 = p[1] - p[0], e2 = p[2] - p[0];
  Vec3 nvec = cross(e1, e2);
  double a2 = norm(nvec);  // 2*area
  // grad(lambda_i) = (n x opposite edge) / (2 area)^2 * |n| ... use edge rotation in plane:
  // For vertex i with opposite edge from j to k: grad = (n x (p_k - p_j)) / (n . n)
  grad[0] = cross(nvec, p[2] - p[1]) * (1.0 / (a2 * a2));
  grad[1] = cross(nvec, p[0] - p[2]) * (1.0 / (a2 * a2));
  grad[2] = cross(nvec, p[1] - p[0]) * (1.0 / (a2 * a2));
  return 0.5 * a2;
}

// Shape quality: volume / rms-edge^3. Equilateral tet ~ 0.118; degenerate -> 0.
inline double tet_quality(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const Vec3* p[4] = {&a, &b, &c, &d};
  double e2 = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      Vec3 e = *p[j] - *p[i];
      e2 += dot(e, e);
    }
  double rms = std::sqrt(e2 / 6.0);
  return tet_volume(a, b, c, d) / (rms * rms * rms);
}

}  // namespace cellmech
