#include "cellmech/verification.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

#include "cellmech/geometry.hpp"

namespace cellmech {
namespace {

constexpr double kFd = 1e-4;  // central difference step

const std::array<Vec3, 5> kPoints = {Vec3{0.3, -0.2, 0.5}, Vec3{0.1, 0.7, -0.4},
                                     Vec3{-0.5, 0.2, 0.6}, Vec3{0.25, 0.33, 0.41},
                                     Vec3{-0.3, -0.4, -0.2}};

Vec3 shifted(Vec3 p, int axis, double d) {
  Vec3 q = p;
  (axis == 0 ? q.x : (axis == 1 ? q.y : q.z)) += d;
  return q;
}

template <class F>
Vec3 fd_grad(F&& f, Vec3 p, double t) {
  Vec3 g;
  for (int a = 0; a < 3; ++a) {
    const double d = (f(shifted(p, a, kFd), t) - f(shifted(p, a, -kFd), t)) / (2 * kFd);
    (a == 0 ? g.x : (a == 1 ? g.y : g.z)) = d;
  }
  return g;
}

template <class F>
double fd_laplacian(F&& f, Vec3 p, double t) {
  double s = 0.0;
  for (int a = 0; a < 3; ++a)
    s += (f(shifted(p, a, kFd), t) - 2.0 * f(p, t) + f(shifted(p, a, -kFd), t)) / (kFd * kFd);
  return s;
}

template <class F>
double fd_hess_quad(F&& f, Vec3 p, double t, Vec3 v) {
  // v' Hess(f) v by differencing along v
  auto along = [&](double d) {
    return f(Vec3{p.x + d * v.x, p.y + d * v.y, p.z + d * v.z}, t);
  };
  return (along(kFd) - 2.0 * along(0.0) + along(-kFd)) / (kFd * kFd);
}

template <class F>
double fd_time(F&& f, Vec3 p, double t) {
  return (f(p, t + kFd) - f(p, t - kFd)) / (2 * kFd);
}

double comp(Vec3 v, int a) { return a == 0 ? v.x : (a == 1 ? v.y : v.z); }

TEST(Manufactured, GradientsMatchFiniteDifferences) {
  const double t = 0.3;
  for (Vec3 p : kPoints) {
    const Vec3 gp = Manufactured::grad_phi(p, t);
    const Vec3 gp_fd = fd_grad([](Vec3 q, double s) { return Manufactured::phi(q, s); }, p, t);
    const Vec3 gr = Manufactured::grad_rho(p, t);
    const Vec3 gr_fd = fd_grad([](Vec3 q, double s) { return Manufactured::rho(q, s); }, p, t);
    for (int a = 0; a < 3; ++a) {
      EXPECT_NEAR(comp(gp, a), comp(gp_fd, a), 1e-6);
      EXPECT_NEAR(comp(gr, a), comp(gr_fd, a), 1e-6);
    }
    const auto gu = Manufactured::grad_u(p, t);
    for (int i = 0; i < 3; ++i) {
      const Vec3 gi_fd =
          fd_grad([i](Vec3 q, double s) { return comp(Manufactured::u(q, s), i); }, p, t);
      for (int a = 0; a < 3; ++a) EXPECT_NEAR(comp(gu[i], a), comp(gi_fd, a), 1e-6);
    }
  }
}

TEST(Manufactured, DivergenceIdentity) {
  const double t = 0.15;
  for (Vec3 p : kPoints) {
    const auto g = Manufactured::grad_u(p, t);
    EXPECT_NEAR(Manufactured::div_u(p, t), g[0].x + g[1].y + g[2].z, 1e-14);
    EXPECT_NEAR(Manufactured::div_u(p, t), -2.0 * p.x * p.y * p.z * std::exp(-4.0 * t), 1e-14);
  }
}

TEST(Manufactured, BodyForceMatchesStressDivergence) {
  // columns of sigma via traction against coordinate normals
  const double t = 0.2;
  const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};
  const std::array<Vec3, 3> basis = {ex, ey, ez};
  for (Vec3 p : kPoints) {
    const Vec3 f = Manufactured::body_force(p, t);
    for (int i = 0; i < 3; ++i) {
      double div_i = 0.0;
      for (int j = 0; j < 3; ++j) {
        auto sig_ij = [&, i, j](Vec3 q, double s) {
          return comp(Manufactured::traction(q, basis[j], s), i);
        };
        div_i += comp(fd_grad(sig_ij, p, t), j);
      }
      EXPECT_NEAR(comp(f, i), -div_i, 1e-6);
    }
  }
}

TEST(Manufactured, Q1MatchesDefiningExpression) {
  const double t = 0.2;
  for (Vec3 p : kPoints) {
    const double q1_fd = fd_time([](Vec3 q, double s) { return Manufactured::phi(q, s); }, p, t) -
                         fd_laplacian([](Vec3 q, double s) { return Manufactured::phi(q, s); }, p,
                                      t) -
                         std::max(Manufactured::tr_sigma(p, t), 0.0);
    EXPECT_NEAR(Manufactured::q1(p, t), q1_fd, 1e-5);
  }
}

TEST(Manufactured, Q2MatchesAmbientSurfaceLaplacian) {
  // on the unit sphere lapS g = lap g - nu'Hess(g)nu - 2 grad(g).nu
  const double t = 0.2;
  for (Vec3 p0 : kPoints) {
    const double n = std::sqrt(p0.x * p0.x + p0.y * p0.y + p0.z * p0.z);
    const Vec3 p{p0.x / n, p0.y / n, p0.z / n};
    auto rho_f = [](Vec3 q, double s) { return Manufactured::rho(q, s); };
    const double lap = fd_laplacian(rho_f, p, t);
    const double gnn = fd_hess_quad(rho_f, p, t, p);
    const Vec3 g = fd_grad(rho_f, p, t);
    const double gn = g.x * p.x + g.y * p.y + g.z * p.z;
    const double lap_s = lap - gnn - 2.0 * gn;
    const double q2_fd =
        fd_time(rho_f, p, t) - lap_s + Manufactured::rho(p, t) - Manufactured::phi(p, t);
    EXPECT_NEAR(Manufactured::q2(p, t), q2_fd, 2e-5);
  }
}

TEST(Manufactured, Q3RestoresRobinConsistency) {
  const double t = 0.2;
  for (Vec3 p0 : kPoints) {
    const double n = std::sqrt(p0.x * p0.x + p0.y * p0.y + p0.z * p0.z);
    const Vec3 p{p0.x / n, p0.y / n, p0.z / n};
    const Vec3 g = Manufactured::grad_phi(p, t);
    const double flux = g.x * p.x + g.y * p.y + g.z * p.z;
    EXPECT_NEAR(flux, Manufactured::rho(p, t) - Manufactured::phi(p, t) + Manufactured::q3(p, t),
                1e-12);
  }
}

TEST(Manufactured, FrozenSpotValues) {
  const Vec3 p{0.3, -0.2, 0.5};
  const double t = 0.25;
  const Vec3 f = Manufactured::body_force(p, t);
  EXPECT_NEAR(f.x, 0.0, 1e-16);
  EXPECT_NEAR(f.y, 0.33109149705429808944, 1e-14);
  EXPECT_NEAR(f.z, -0.17658213176229231437, 1e-14);
  EXPECT_NEAR(Manufactured::tr_sigma(p, t), 0.11036383235143269648, 1e-15);
  EXPECT_NEAR(Manufactured::q1(p, t), -1.5679449916323591514, 1e-14);
  const Vec3 u = Manufactured::u(p, t);
  EXPECT_NEAR(u.x, -0.0066218299410859617887, 1e-16);
  EXPECT_NEAR(u.y, -0.0022072766470286539296, 1e-16);
  EXPECT_NEAR(u.z, 0.011036383235143269648, 1e-16);

  const Vec3 ps{0.4866642633922876, -0.3244428422615251, 0.8111071056538127};
  EXPECT_NEAR(Manufactured::rho(ps, t), 0.50582301241303873063, 1e-14);
  EXPECT_NEAR(Manufactured::q2(ps, t), -0.22053765368115763046, 1e-14);
  EXPECT_NEAR(Manufactured::q3(ps, t), -0.15900861477727509796, 1e-14);
}

TEST(Benchmark, InterpolationOnlyConvergesAtSecondOrder) {
  BenchmarkOptions opt;
  opt.levels = {0, 1, 2};
  opt.interpolation_only = true;
  EocReport rep = run_benchmark(opt);
  ASSERT_EQ(rep.rows.size(), 3u);
  const auto t = rep.eoc_table();
  ASSERT_EQ(t.size(), 2u);
  for (const auto& pair : t) {
    EXPECT_GT(pair[0], 1.4);  // phi L2
    EXPECT_GT(pair[2], 1.4);  // rho L2
    EXPECT_GT(pair[4], 1.4);  // u L2
    for (double v : pair) EXPECT_LT(v, 3.2);
  }
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    EXPECT_LT(rep.rows[i].phi_l2, rep.rows[i - 1].phi_l2);
    EXPECT_LT(rep.rows[i].u_h1, rep.rows[i - 1].u_h1);
  }
}

TEST(Benchmark, CoarseLevelsErrorsDecrease) {
  BenchmarkOptions opt;
  opt.levels = {0, 1};
  EocReport rep = run_benchmark(opt);
  ASSERT_EQ(rep.rows.size(), 2u);
  const LevelErrors& c = rep.rows[0];
  const LevelErrors& f = rep.rows[1];
  EXPECT_GT(c.steps, 0);
  EXPECT_GT(f.steps, c.steps);
  EXPECT_LT(f.phi_l2, c.phi_l2);
  EXPECT_LT(f.rho_l2, c.rho_l2);
  EXPECT_LT(f.u_l2, c.u_l2);
  EXPECT_LT(f.u_h1, c.u_h1);
  // coarse-level errors carry a large first-order-in-time component; bounded
  // by the scale of the initial transient, far below any divergence
  EXPECT_LT(c.phi_l2, 2.0);
  EXPECT_TRUE(std::isfinite(c.rho_h1) && std::isfinite(f.rho_h1));
}

TEST(Benchmark, EocFormula) {
  EXPECT_NEAR(eoc(4.0, 1.0, 2.0, 1.0), 2.0, 1e-14);
  EXPECT_NEAR(eoc(2.0, 1.0, 2.0, 1.0), 1.0, 1e-14);
}

}  // namespace
}  // namespace cellmech
