#include "cellmech/cg.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace cellmech {

SolveReport solve_constrained(const Csr& a, std::span<const double> b, std::span<double> x,
                              const std::vector<std::vector<double>>& c_rows,
                              const std::vector<std::vector<double>>& kernel_basis, double tol,
                              int maxit) {
  const int n = a.rows;
  const int m = static_cast<int>(c_rows.size());
  if (m == 0) return cg(a, b, x, tol, maxit);

  const double bnorm = std::sqrt(detail::dot_seq(b, b));
  for (const auto& r : kernel_basis) {
    double rb = detail::dot_seq(r, b);
    double rn = std::sqrt(detail::dot_seq(r, r));
    if (bnorm > 0.0 && std::abs(rb) > 1e-8 * bnorm * rn)
      throw SolverError("solve_constrained: load has a rigid-mode component above tolerance");
  }

  std::vector<double> diag = a.diagonal();
  double dmax = 0.0;
  for (double d : diag) dmax = std::max(dmax, d);
  if (dmax <= 0.0) dmax = 1.0;

  std::vector<double> w(m);
  for (int k = 0; k < m; ++k) {
    double cc = detail::dot_seq(c_rows[k], c_rows[k]);
    if (cc <= 0.0) throw SolverError("solve_constrained: zero constraint row");
    w[k] = dmax / cc;
  }
  std::vector<double> diag_aug = diag;
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < n; ++i) diag_aug[i] += w[k] * c_rows[k][i] * c_rows[k][i];

  auto apply = [&](std::span<const double> in, std::span<double> out) {
    a.matvec(in, out);
    for (int k = 0; k < m; ++k) {
      double s = w[k] * detail::dot_seq(c_rows[k], in);
      const auto& ck = c_rows[k];
      for (int i = 0; i < n; ++i) out[i] += s * ck[i];
    }
  };
  SolveReport rep = pcg(apply, b, x, diag_aug, tol, maxit);

  // exact kernel sweep: x <- x - R alpha with (C R) alpha = C x
  const int q = static_cast<int>(kernel_basis.size());
  if (q > 0) {
    Eigen::MatrixXd cr(m, q);
    Eigen::VectorXd cx(m);
    for (int k = 0; k < m; ++k) {
      cx(k) = detail::dot_seq(c_rows[k], std::span<const double>(x.data(), x.size()));
      for (int j = 0; j < q; ++j) cr(k, j) = detail::dot_seq(c_rows[k], kernel_basis[j]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(cr);
    if (lu.rank() < std::min(m, q))
      throw SolverError("solve_constrained: constraint rows are rank deficient on the kernel");
    Eigen::VectorXd alpha = lu.solve(cx);
    for (int j = 0; j < q; ++j) {
      const auto& r = kernel_basis[j];
      double aj = alpha(j);
      for (int i = 0; i < n; ++i) x[i] -= aj * r[i];
    }
  }
  return rep;
}

}  // namespace cellmech
