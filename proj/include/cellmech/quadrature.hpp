#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "cellmech/errors.hpp"
#include "cellmech/geometry.hpp"

namespace cellmech {

// Quadrature rules in barycentric coordinates on the reference simplex.
// Weights sum to 1; physical integrals scale by element measure.

struct TetQuadPoint {
  std::array<double, 4> b;
  double w;
};

struct TriQuadPoint {
  std::array<double, 3> b;
  double w;
};

struct TetRule {
  int degree;
  std::vector<TetQuadPoint> pts;
};

struct TriRule {
  int degree;
  std::vector<TriQuadPoint> pts;
};

namespace detail {

inline TetRule make_tet_rule(int degree) {
  TetRule r;
  if (degree <= 1) {
    r.degree = 1;
    r.pts = {{{0.25, 0.25, 0.25, 0.25}, 1.0}};
  } else if (degree == 2) {
    // 4-point symmetric rule, exact to degree 2.
    const double a = 0.585410196624968454;  // (5 + 3 sqrt 5)/20
    const double b = 0.138196601125010515;  // (5 - sqrt 5)/20
    r.degree = 2;
    r.pts = {{{a, b, b, b}, 0.25}, {{b, a, b, b}, 0.25}, {{b, b, a, b}, 0.25}, {{b, b, b, a}, 0.25}};
  } else if (degree == 3) {
    // Keast 5-point rule, exact to degree 3.
    r.degree = 3;
    r.pts.push_back({{0.25, 0.25, 0.25, 0.25}, -0.8});
    const double a = 0.5, b = 1.0 / 6.0;
    r.pts.push_back({{a, b, b, b}, 0.45});
    r.pts.push_back({{b, a, b, b}, 0.45});
    r.pts.push_back({{b, b, a, b}, 0.45});
    r.pts.push_back({{b, b, b, a}, 0.45});
  } else {
    // Conical product (Duffy) rule from 4-point Gauss-Legendre per direction: exact
    // well beyond degree 5 for the collapsed coordinates used here.
    const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                          0.8611363115940526};
    const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                          0.3478548451374538};
    r.degree = 5;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          double u = 0.5 * (gx[i] + 1.0), v = 0.5 * (gx[j] + 1.0), w = 0.5 * (gx[k] + 1.0);
          // Duffy map cube -> simplex: x = u, y = v(1-u), z = w(1-u)(1-v)
          double x = u, y = v * (1.0 - u), z = w * (1.0 - u) * (1.0 - v);
          double jac = (1.0 - u) * (1.0 - u) * (1.0 - v);
          // cube weight gw/8, Jacobian jac, measure normalization 1/(1/6)
          r.pts.push_back({{1.0 - x - y - z, x, y, z}, gw[i] * gw[j] * gw[k] * 0.75 * jac});
        }
    // kill roundoff drift in the weight sum
    double s = 0.0;
    for (auto& q : r.pts) s += q.w;
    for (auto& q : r.pts) q.w /= s;
  }
  return r;
}

inline TriRule make_tri_rule(int degree) {
  TriRule r;
  if (degree <= 1) {
    r.degree = 1;
    const double t = 1.0 / 3.0;
    r.pts = {{{t, t, t}, 1.0}};
  } else if (degree == 2) {
    // edge-midpoint rule, exact to degree 2
    r.degree = 2;
    const double t = 1.0 / 3.0;
    r.pts = {{{0.5, 0.5, 0.0}, t}, {{0.0, 0.5, 0.5}, t}, {{0.5, 0.0, 0.5}, t}};
  } else {
    // 7-point Radon rule, exact to degree 5
    r.degree = 5;
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0, w1 = (155.0 - s15) / 1200.0;
    const double a2 = (6.0 + s15) / 21.0, w2 = (155.0 + s15) / 1200.0;
    const double t = 1.0 / 3.0;
    r.pts.push_back({{t, t, t}, 9.0 / 40.0});
    r.pts.push_back({{1.0 - 2.0 * a1, a1, a1}, w1});
    r.pts.push_back({{a1, 1.0 - 2.0 * a1, a1}, w1});
    r.pts.push_back({{a1, a1, 1.0 - 2.0 * a1}, w1});
    r.pts.push_back({{1.0 - 2.0 * a2, a2, a2}, w2});
    r.pts.push_back({{a2, 1.0 - 2.0 * a2, a2}, w2});
    r.pts.push_back({{a2, a2, 1.0 - 2.0 * a2}, w2});
  }
  return r;
}

}  // namespace detail

// Rules are cached per degree; returned references stay valid for program lifetime.
inline const TetRule& tet_rule(int degree) {
  static const TetRule r1 = detail::make_tet_rule(1);
  static const TetRule r2 = detail::make_tet_rule(2);
  static const TetRule r3 = detail::make_tet_rule(3);
  static const TetRule r5 = detail::make_tet_rule(5);
  if (degree <= 1) return r1;
  if (degree == 2) return r2;
  if (degree == 3) return r3;
  return r5;
}

inline const TriRule& tri_rule(int degree) {
  static const TriRule r1 = detail::make_tri_rule(1);
  static const TriRule r2 = detail::make_tri_rule(2);
  static const TriRule r5 = detail::make_tri_rule(5);
  if (degree <= 1) return r1;
  if (degree == 2) return r2;
  return r5;
}

inline Vec3 bary_point(const std::array<Vec3, 4>& p, const std::array<double, 4>& b) {
  return p[0] * b[0] + p[1] * b[1] + p[2] * b[2] + p[3] * b[3];
}

inline Vec3 bary_point(const std::array<Vec3, 3>& p, const std::array<double, 3>& b) {
  return p[0] * b[0] + p[1] * b[1] + p[2] * b[2];
}

}  // namespace cellmech
