#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "cellmech/csr.hpp"
#include "cellmech/errors.hpp"

namespace cellmech {

struct SolveReport {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

namespace detail {

inline double dot_seq(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

// Preconditioned conjugate gradients with Jacobi (diagonal) preconditioning.
// apply_a must compute y = A x for an SPD operator. x holds the initial guess on
// entry and the solution on exit. Convergence test: ||b - Ax|| <= tol * ||b||.
// iter_hook (optional) receives the current iterate after each update.
template <class ApplyA>
SolveReport pcg(ApplyA&& apply_a, std::span<const double> b, std::span<double> x,
                std::span<const double> diag, double tol, int maxit,
                const std::function<void(std::span<const double>)>& iter_hook = nullptr) {
  const std::size_t n = b.size();
  SolveReport rep;
  double bnorm = std::sqrt(detail::dot_seq(b, b));
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    rep.converged = true;
    return rep;
  }
  std::vector<double> inv_d(n);
  for (std::size_t i = 0; i < n; ++i) inv_d[i] = diag[i] > 0.0 ? 1.0 / diag[i] : 1.0;

  std::vector<double> r(n), z(n), p(n), ap(n);
  apply_a(x, std::span<double>(ap));
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_d[i] * r[i];
  p = z;
  double rz = detail::dot_seq(r, z);
  double rnorm = std::sqrt(detail::dot_seq(r, r));
  rep.rel_residual = rnorm / bnorm;
  if (rep.rel_residual <= tol) {
    rep.converged = true;
    return rep;
  }
  for (int it = 1; it <= maxit; ++it) {
    apply_a(p, std::span<double>(ap));
    double pap = detail::dot_seq(p, ap);
    if (!(pap > 0.0)) throw NumericError("cg: operator not positive definite (p'Ap <= 0)");
    double alpha = rz / pap;
    for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
    for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * ap[i];
    rnorm = std::sqrt(detail::dot_seq(r, r));
    if (std::isnan(rnorm)) throw NumericError("cg: residual is NaN");
    if (iter_hook) iter_hook(x);
    rep.iterations = it;
    rep.rel_residual = rnorm / bnorm;
    if (rep.rel_residual <= tol) {
      rep.converged = true;
      return rep;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_d[i] * r[i];
    double rz_new = detail::dot_seq(r, z);
    double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return rep;  // converged stays false; caller decides
}

inline SolveReport cg(const Csr& a, std::span<const double> b, std::span<double> x, double tol,
                      int maxit,
                      const std::function<void(std::span<const double>)>& iter_hook = nullptr) {
  if (!a.spd) throw SolverError("cg: matrix is not flagged SPD");
  std::vector<double> d = a.diagonal();
  return pcg([&a](std::span<const double> in, std::span<double> out) { a.matvec(in, out); }, b, x,
             d, tol, maxit, iter_hook);
}

// Solve A x = b subject to c_k' x = 0 for the rows of C (rank 6 in practice).
// A is SPD on the constrained complement and C spans its kernel. The saddle system
// is reduced to a single CG solve on the rank-augmented operator A + sum w_k c_k c_k',
// followed by an exact correction in span(kernel_basis) that zeroes C x. The load must
// be discretely compatible: |r' b| <= 1e-8 ||b|| for every kernel basis vector r.
SolveReport solve_constrained(const Csr& a, std::span<const double> b, std::span<double> x,
                              const std::vector<std::vector<double>>& c_rows,
                              const std::vector<std::vector<double>>& kernel_basis, double tol,
                              int maxit);

}  // namespace cellmech
