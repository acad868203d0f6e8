#include "cellmech/elasticity.hpp"

#include <algorithm>
#include <cmath>

#include "cellmech/errors.hpp"

namespace cellmech {

namespace {

std::vector<int> set_difference_sorted(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

ElasticSolver::ElasticSolver(const Mesh& mesh, const ModelParams& params,
                             const Scenario& scenario, double tol, int max_iters)
    : mesh_(mesh), params_(params), scenario_(scenario), tol_(tol), max_iters_(max_iters) {
  cache_ = make_vector_tet_cache(mesh_);
  load_tris_ = mesh_.membrane;
  auto modes = rigid_modes(mesh_);
  auto rows = rigid_constraint_rows(mesh_);
  switch (scenario_.attachment) {
    case Attachment::PureTraction:
      rows_ = rows;
      kernel_ = modes;
      break;
    case Attachment::PartiallyFixed: {
      if (!mesh_.has_region("Gamma0") || mesh_.region("Gamma0").empty())
        throw ConfigError("partially fixed attachment requires a tagged bottom patch Gamma0");
      load_tris_ = set_difference_sorted(mesh_.membrane, mesh_.region("Gamma0"));
      // clamp the normal component on the bottom; in-plane translations and the
      // in-plane rotation stay free and are pinned through their functionals
      rows_ = {rows[0], rows[1], rows[3]};
      kernel_ = {modes[0], modes[1], modes[5]};
      std::vector<char> is_fixed(3 * mesh_.n_vertices(), 0);
      for (int v : mesh_.region_vertices("Gamma0")) {
        fixed_.push_back(3 * v + 2);
        is_fixed[3 * v + 2] = 1;
      }
      std::sort(fixed_.begin(), fixed_.end());
      const Csr& m = cache_.mat;
      for (int r = 0; r < m.rows; ++r)
        for (int k = m.rowptr[r]; k < m.rowptr[r + 1]; ++k) {
          if (!is_fixed[r] && !is_fixed[m.colind[k]]) continue;
          if (r == m.colind[k])
            fixed_diag_slots_.push_back(k);
          else
            zero_slots_.push_back(k);
        }
      break;
    }
    case Attachment::NucleusRobin:
      if (!mesh_.has_region("nucleus") || mesh_.region("nucleus").empty())
        throw ConfigError("nucleus attachment requires a tagged nucleus surface");
      robin_ = surface_vector_mass(mesh_, mesh_.region("nucleus"));
      break;
  }
}

void ElasticSolver::element_moduli(std::span<const double> phi_a_nodal,
                                   std::vector<double>& lambda_e, std::vector<double>& mu_e,
                                   std::vector<double>& ec_e) const {
  int n = mesh_.n_tets();
  lambda_e.resize(n);
  mu_e.resize(n);
  ec_e.resize(n);
  for (int e = 0; e < n; ++e) {
    double ec = params_.constant_ec;
    if (scenario_.coupling == Coupling::Coupled) {
      double mean = 0.0;
      for (int a = 0; a < 4; ++a) mean += phi_a_nodal[mesh_.tets[e][a]];
      ec = params_.e_c(0.25 * mean);
    }
    ec_e[e] = ec;
    params_.lame(ec, lambda_e[e], mu_e[e]);
  }
}

void ElasticSolver::assemble(std::span<const double> lambda_e, std::span<const double> mu_e,
                             double scale) {
  if (filled_ && scale == memo_scale_ && std::equal(lambda_e.begin(), lambda_e.end(),
                                                    memo_lambda_.begin(), memo_lambda_.end()) &&
      std::equal(mu_e.begin(), mu_e.end(), memo_mu_.begin(), memo_mu_.end()))
    return;
  fill_elastic_stiffness(cache_, mesh_, lambda_e, mu_e);
  if (!fixed_.empty()) {
    auto& vals = cache_.mat.vals;
    for (int k : zero_slots_) vals[k] = 0.0;
    double dmax = 0.0;
    std::vector<double> diag = cache_.mat.diagonal();
    for (int i = 0; i < cache_.mat.rows; ++i) dmax = std::max(dmax, std::abs(diag[i]));
    for (int k : fixed_diag_slots_) vals[k] = dmax;
  }
  if (scale != 1.0)
    for (double& v : cache_.mat.vals) v *= scale;
  if (robin_.rows > 0) {
    // anchoring entries live inside the owner tet's block, so the pattern covers them
    for (int r = 0; r < robin_.rows; ++r)
      for (int k = robin_.rowptr[r]; k < robin_.rowptr[r + 1]; ++k) {
        int c = robin_.colind[k];
        auto lo = cache_.mat.colind.begin() + cache_.mat.rowptr[r];
        auto hi = cache_.mat.colind.begin() + cache_.mat.rowptr[r + 1];
        auto it = std::lower_bound(lo, hi, c);
        cache_.mat.vals[it - cache_.mat.colind.begin()] += params_.omega * robin_.vals[k];
      }
  }
  memo_lambda_.assign(lambda_e.begin(), lambda_e.end());
  memo_mu_.assign(mu_e.begin(), mu_e.end());
  memo_scale_ = scale;
  filled_ = true;
}

SolveReport ElasticSolver::run(std::span<const double> lambda_e, std::span<const double> mu_e,
                               std::vector<double> load, double theta, double dt,
                               std::vector<double>& u) {
  double scale = theta > 0.0 ? 1.0 + theta / dt : 1.0;
  assemble(lambda_e, mu_e, scale);
  if (theta > 0.0) {
    // memory term (theta/dt) K u_prev recovered from the scaled operator
    std::vector<double> ku(load.size(), 0.0);
    cache_.mat.matvec(u, ku);
    if (robin_.rows > 0) robin_.matvec_add(u, ku, -params_.omega);
    double f = (theta / dt) / scale;
    for (std::size_t i = 0; i < load.size(); ++i) load[i] += f * ku[i];
  }
  if (scenario_.attachment == Attachment::PureTraction)
    load = remove_rigid_work(mesh_, mesh_.membrane, std::move(load));
  else if (scenario_.attachment == Attachment::PartiallyFixed)
    // the free in-plane modes see no stiffness, so their (discretization-level)
    // share of the load has to go; the clamped normal direction keeps its load
    load = remove_rigid_work(mesh_, load_tris_, std::move(load), kernel_);
  for (int d : fixed_) load[d] = 0.0;
  if (scenario_.attachment == Attachment::NucleusRobin)
    return cg(cache_.mat, load, u, tol_, max_iters_);
  return solve_constrained(cache_.mat, load, u, rows_, kernel_, tol_, max_iters_);
}

SolveReport ElasticSolver::solve(std::span<const double> lambda_e, std::span<const double> mu_e,
                                 std::vector<double> load, std::vector<double>& u) {
  return run(lambda_e, mu_e, std::move(load), 0.0, 1.0, u);
}

SolveReport ElasticSolver::step_viscoelastic(std::span<const double> lambda_e,
                                             std::span<const double> mu_e,
                                             std::vector<double> load, double dt,
                                             std::vector<double>& u) {
  if (dt <= 0.0) throw NumericError("viscoelastic step requires dt > 0");
  return run(lambda_e, mu_e, std::move(load), params_.theta, dt, u);
}

}  // namespace cellmech
