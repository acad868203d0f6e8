#include "cellmech/cg.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

using namespace cellmech;

namespace {

Csr dense_to_csr(const Eigen::MatrixXd& a, bool spd) {
  CooBuilder coo(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) coo.add(i, j, a(i, j));
  return coo.build(true, spd);
}

Eigen::MatrixXd random_spd(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = u(rng);
  Eigen::MatrixXd a = b.transpose() * b;
  a.diagonal().array() += n;  // well conditioned
  return a;
}

}  // namespace

TEST(Cg, IdentityConvergesInOneIteration) {
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(5, 5);
  Csr a = dense_to_csr(eye, true);
  std::vector<double> b = {1.0, -2.0, 3.0, 0.5, 4.0}, x(5, 0.0);
  SolveReport rep = cg(a, b, x, 1e-12, 100);
  EXPECT_TRUE(rep.converged);
  EXPECT_LE(rep.iterations, 1);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(x[i], b[i], 1e-12);
}

TEST(Cg, TwoByTwoKnownSolution) {
  Eigen::MatrixXd m(2, 2);
  m << 4.0, 1.0, 1.0, 3.0;
  Csr a = dense_to_csr(m, true);
  std::vector<double> b = {1.0, 2.0}, x(2, 0.0);
  SolveReport rep = cg(a, b, x, 1e-14, 100);
  EXPECT_TRUE(rep.converged);
  EXPECT_NEAR(x[0], 1.0 / 11.0, 1e-12);
  EXPECT_NEAR(x[1], 7.0 / 11.0, 1e-12);
}

TEST(Cg, ZeroRhsReturnsZeroInZeroIterations) {
  Csr a = dense_to_csr(random_spd(8, 3), true);
  std::vector<double> b(8, 0.0), x(8, 0.7);  // nonzero initial guess
  SolveReport rep = cg(a, b, x, 1e-12, 100);
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(rep.iterations, 0);
  for (double v : x) EXPECT_EQ(v, 0.0);
}

TEST(Cg, MatchesDenseSolver) {
  const int n = 60;
  Eigen::MatrixXd ad = random_spd(n, 17);
  Csr a = dense_to_csr(ad, true);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd bd(n);
  for (int i = 0; i < n; ++i) bd(i) = u(rng);
  Eigen::VectorXd xd = ad.ldlt().solve(bd);

  std::vector<double> b(bd.data(), bd.data() + n), x(n, 0.0);
  SolveReport rep = cg(a, b, x, 1e-12, 10 * n);
  EXPECT_TRUE(rep.converged);
  for (int i = 0; i < n; ++i) EXPECT_NEAR(x[i], xd(i), 1e-9);
}

TEST(Cg, ErrorIsMonotoneInOperatorNorm) {
  const int n = 40;
  Eigen::MatrixXd ad = random_spd(n, 23);
  Csr a = dense_to_csr(ad, true);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd xstar(n);
  for (int i = 0; i < n; ++i) xstar(i) = u(rng);
  Eigen::VectorXd bd = ad * xstar;

  std::vector<double> b(bd.data(), bd.data() + n), x(n, 0.0);
  std::vector<double> anorm_log;
  auto hook = [&](std::span<const double> xi) {
    Eigen::VectorXd e(n);
    for (int i = 0; i < n; ++i) e(i) = xi[i] - xstar(i);
    anorm_log.push_back(std::sqrt(e.dot(ad * e)));
  };
  cg(a, b, x, 1e-13, 10 * n, hook);
  ASSERT_GE(anorm_log.size(), 3u);
  for (std::size_t i = 1; i < anorm_log.size(); ++i)
    EXPECT_LE(anorm_log[i], anorm_log[i - 1] * (1.0 + 1e-12));
}

TEST(Cg, ReportsNonConvergence) {
  Csr a = dense_to_csr(random_spd(30, 31), true);
  std::vector<double> b(30, 1.0), x(30, 0.0);
  SolveReport rep = cg(a, b, x, 1e-16, 1);
  EXPECT_FALSE(rep.converged);
  EXPECT_EQ(rep.iterations, 1);
}

TEST(Cg, RejectsNonSpdFlag) {
  Eigen::MatrixXd m = random_spd(4, 2);
  Csr a = dense_to_csr(m, false);
  std::vector<double> b(4, 1.0), x(4, 0.0);
  EXPECT_THROW(cg(a, b, x, 1e-10, 10), SolverError);
}

TEST(Cg, NanBreakdownThrows) {
  Eigen::MatrixXd m = random_spd(4, 2);
  m(2, 2) = std::numeric_limits<double>::quiet_NaN();
  Csr a = dense_to_csr(m, true);
  std::vector<double> b(4, 1.0), x(4, 0.0);
  EXPECT_THROW(cg(a, b, x, 1e-10, 10), NumericError);
}

namespace {

struct ConstrainedFixture {
  int n = 12;
  Eigen::MatrixXd a_dense;
  Csr a;
  std::vector<std::vector<double>> kernel;  // 2 kernel vectors
  std::vector<std::vector<double>> c_rows;  // constraints = same functionals

  ConstrainedFixture() {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd r(n, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) = u(rng);
    Eigen::MatrixXd proj =
        Eigen::MatrixXd::Identity(n, n) - r * (r.transpose() * r).inverse() * r.transpose();
    Eigen::MatrixXd b = random_spd(n, 51);
    a_dense = proj * b * proj;  // SPD on the complement, kernel = span(r)
    a_dense = 0.5 * (a_dense + a_dense.transpose());
    a = dense_to_csr(a_dense, true);
    for (int j = 0; j < 2; ++j) {
      std::vector<double> col(n);
      for (int i = 0; i < n; ++i) col[i] = r(i, j);
      kernel.push_back(col);
      c_rows.push_back(col);
    }
  }

  [[nodiscard]] std::vector<double> compatible_rhs(unsigned seed) const {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c(i) = u(rng);
    Eigen::MatrixXd r(n, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) = kernel[j][i];
    Eigen::VectorXd bc = c - r * (r.transpose() * r).inverse() * (r.transpose() * c);
    return {bc.data(), bc.data() + n};
  }

  [[nodiscard]] Eigen::VectorXd kkt_oracle(const std::vector<double>& b) const {
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 2, n + 2);
    kkt.topLeftCorner(n, n) = a_dense;
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < n; ++i) {
        kkt(i, n + j) = c_rows[j][i];
        kkt(n + j, i) = c_rows[j][i];
      }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 2);
    for (int i = 0; i < n; ++i) rhs(i) = b[i];
    Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
    return sol.head(n);
  }
};

}  // namespace

TEST(SolveConstrained, ZeroRhsGivesZero) {
  ConstrainedFixture f;
  std::vector<double> b(f.n, 0.0), x(f.n, 0.0);
  SolveReport rep = solve_constrained(f.a, b, x, f.c_rows, f.kernel, 1e-12, 1000);
  EXPECT_TRUE(rep.converged);
  for (double v : x) EXPECT_EQ(v, 0.0);
}

TEST(SolveConstrained, MatchesDenseKktOracle) {
  ConstrainedFixture f;
  std::vector<double> b = f.compatible_rhs(77);
  std::vector<double> x(f.n, 0.0);
  SolveReport rep = solve_constrained(f.a, b, x, f.c_rows, f.kernel, 1e-13, 2000);
  EXPECT_TRUE(rep.converged);
  Eigen::VectorXd xd = f.kkt_oracle(b);
  for (int i = 0; i < f.n; ++i) EXPECT_NEAR(x[i], xd(i), 1e-8);
  // constraints hold to machine precision relative to |x|
  double xn = std::sqrt(detail::dot_seq(x, x));
  for (const auto& c : f.c_rows) EXPECT_LE(std::abs(detail::dot_seq(c, x)), 1e-10 * xn);
}

TEST(SolveConstrained, IncompatibleLoadRejected) {
  ConstrainedFixture f;
  std::vector<double> b = f.compatible_rhs(78);
  for (int i = 0; i < f.n; ++i) b[i] += 0.1 * f.kernel[0][i];
  std::vector<double> x(f.n, 0.0);
  EXPECT_THROW(solve_constrained(f.a, b, x, f.c_rows, f.kernel, 1e-12, 1000), SolverError);
}

TEST(SolveConstrained, InvariantToRigidShiftOfInitialGuess) {
  ConstrainedFixture f;
  std::vector<double> b = f.compatible_rhs(79);
  std::vector<double> x1(f.n, 0.0), x2(f.n);
  for (int i = 0; i < f.n; ++i) x2[i] = 3.0 * f.kernel[1][i];
  solve_constrained(f.a, b, x1, f.c_rows, f.kernel, 1e-13, 2000);
  solve_constrained(f.a, b, x2, f.c_rows, f.kernel, 1e-13, 2000);
  double xn = std::sqrt(detail::dot_seq(x1, x1));
  for (int i = 0; i < f.n; ++i) EXPECT_NEAR(x1[i], x2[i], 1e-9 * std::max(1.0, xn));
}

TEST(SolveConstrained, RankDeficientConstraintsRejected) {
  ConstrainedFixture f;
  auto c_bad = f.c_rows;
  c_bad[1] = c_bad[0];  // duplicate row
  std::vector<double> b = f.compatible_rhs(80);
  std::vector<double> x(f.n, 0.0);
  EXPECT_THROW(solve_constrained(f.a, b, x, c_bad, f.kernel, 1e-12, 1000), SolverError);
}

TEST(CooBuilder, MergesDuplicatesAndDropsZeros) {
  CooBuilder coo(3, 3);
  coo.add(0, 0, 1.0);
  coo.add(0, 0, 2.0);
  coo.add(1, 2, 5.0);
  coo.add(1, 2, -5.0);  // cancels exactly
  coo.add(2, 1, 4.0);
  Csr m = coo.build();
  EXPECT_EQ(m.rowptr, (std::vector<int>{0, 1, 1, 2}));
  EXPECT_EQ(m.colind, (std::vector<int>{0, 1}));
  EXPECT_DOUBLE_EQ(m.vals[0], 3.0);
  EXPECT_DOUBLE_EQ(m.vals[1], 4.0);
}

TEST(Csr, MatvecMatchesDense) {
  Eigen::MatrixXd ad = random_spd(20, 99);
  Csr a = dense_to_csr(ad, true);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd xd(20);
  for (int i = 0; i < 20; ++i) xd(i) = u(rng);
  Eigen::VectorXd yd = ad * xd;
  std::vector<double> x(xd.data(), xd.data() + 20), y(20, 0.0);
  a.matvec(x, y);
  for (int i = 0; i < 20; ++i) EXPECT_NEAR(y[i], yd(i), 1e-12);
}

TEST(Csr, MatvecIdenticalAcrossThreadCounts) {
  Eigen::MatrixXd ad = random_spd(50, 7);
  Csr a = dense_to_csr(ad, true);
  std::vector<double> x(50), y1(50), y4(50);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : x) v = u(rng);
  set_thread_count(1);
  a.matvec(x, y1);
  set_thread_count(4);
  a.matvec(x, y4);
  set_thread_count(1);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(y1[i], y4[i]);
}
