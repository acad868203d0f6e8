#include "cellmech/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "cellmech/cg.hpp"
#include "cellmech/errors.hpp"

namespace cellmech {

namespace {

constexpr double kNegativityFloor = -1e-8;
constexpr double kSteadyRelTol = 1e-3;
constexpr double kSteadyWindowSeconds = 10.0;

void scale_inplace(std::span<double> y, double a) {
  for (double& v : y) v *= a;
}

}  // namespace

Simulator::Simulator(const Mesh& mesh, const ModelParams& params, const Scenario& scenario,
                     const SimOptions& opt)
    : mesh_(mesh), params_(params), scenario_(scenario), opt_(opt), geo_(geometry(mesh)) {
  params_.validate();
  if (!(opt_.dt > 0.0)) throw ConfigError("time step must be positive");
  if (!(opt_.t_end >= opt_.dt)) throw ConfigError("final time must cover at least one step");
  m_rho_ = params_.m_rho(geo_.volume, geo_.surface_area);

  mass_ = bulk_mass(mesh_);
  stiff_ = bulk_stiffness(mesh_);
  robin_mem_ = surface_mass(mesh_, mesh_.membrane, /*bulk_indexed=*/true);
  robin_stim_ = surface_mass(mesh_, stiffness_stimulus_tris(mesh_, scenario_.stimulus),
                             /*bulk_indexed=*/true);
  robin_stim_coeff_ = geo_.n_r * (params_.k3_tilde(params_.e_stiff) - params_.k2);

  smass_ = surface_mass(mesh_, mesh_.membrane);
  sstiff_ = surface_stiffness(mesh_, mesh_.membrane);
  const std::vector<int> react = rho_reaction_tris(mesh_, scenario_.stimulus);
  smass_reg_ = surface_mass(mesh_, react);
  react_ = make_scalar_tri_cache(mesh_, react);
  spos_ = make_scalar_tet_cache(mesh_);

  diag_mass_ = mass_.diagonal();
  diag_stiff_ = stiff_.diagonal();
  diag_rmem_ = robin_mem_.diagonal();
  diag_rstim_ = robin_stim_.diagonal();
  diag_smass_ = smass_.diagonal();
  diag_sstiff_ = sstiff_.diagonal();

  if (!opt_.reduced)
    elastic_.emplace(mesh_, params_, scenario_, opt_.mech_tol, opt_.max_iters);

  const int nv = mesh_.n_vertices();
  phi_d_.assign(nv, params_.phi_d0);
  phi_a_.assign(nv, params_.phi_a0);
  rho_a_.assign(mesh_.n_surf(), params_.rho_a0);
  u_.assign(3 * nv, 0.0);
  lam_e_.assign(mesh_.n_tets(), 0.0);
  mu_e_.assign(mesh_.n_tets(), 0.0);
  ec_e_.assign(mesh_.n_tets(), 0.0);
  divu_e_.assign(mesh_.n_tets(), 0.0);
  trsig_pos_e_.assign(mesh_.n_tets(), 0.0);

  steady_window_ = std::max(1, static_cast<int>(std::llround(kSteadyWindowSeconds / opt_.dt)));
}

void Simulator::solve_mechanics() {
  elastic_->element_moduli(phi_a_, lam_e_, mu_e_, ec_e_);
  std::vector<double> w(mesh_.n_surf());
  for (int s = 0; s < mesh_.n_surf(); ++s) w[s] = std::max(rho_a_[s], 0.0);
  std::vector<double> load = pressure_load(mesh_, elastic_->load_tris(), w, params_.k6);

  SolveReport rep;
  if (params_.theta > 0.0)
    rep = elastic_->step_viscoelastic(lam_e_, mu_e_, std::move(load), opt_.dt, u_);
  else
    rep = elastic_->solve(lam_e_, mu_e_, std::move(load), u_);
  if (!rep.converged) throw SolverError("mechanics solve did not converge");

  divu_e_ = element_div(mesh_, u_);
  std::vector<double> ts = element_tr_sigma(mesh_, u_, lam_e_, mu_e_);
  for (int e = 0; e < mesh_.n_tets(); ++e) trsig_pos_e_[e] = std::max(ts[e], 0.0);
}

void Simulator::step_chemistry() {
  const double dt = opt_.dt;
  const double inv_dt = 1.0 / dt;
  const int nv = mesh_.n_vertices();
  const int ns = mesh_.n_surf();
  const double rmem_coeff = geo_.n_r * params_.k2;
  const bool couple = !opt_.reduced && params_.c1 != 0.0;

  if (couple) fill_cell_weighted_mass(spos_, mesh_, trsig_pos_e_);

  // membrane efflux of inactive FAK; the identical operator feeds the active
  // equation so the total FAK budget telescopes exactly
  auto add_robin = [&](std::span<const double> x, std::span<double> y) {
    robin_mem_.matvec_add(x, y, rmem_coeff);
    robin_stim_.matvec_add(x, y, robin_stim_coeff_);
  };

  // inactive FAK, implicit in the stress sink and the efflux
  {
    auto apply = [&](std::span<const double> x, std::span<double> y) {
      mass_.matvec(x, y);
      scale_inplace(y, inv_dt);
      stiff_.matvec_add(x, y, params_.d1);
      if (couple) spos_.mat.matvec_add(x, y, params_.c1);
      add_robin(x, y);
    };
    std::vector<double> diag(nv), b(nv), rhs_nodal(nv);
    std::vector<double> diag_s = couple ? spos_.mat.diagonal() : std::vector<double>();
    for (int i = 0; i < nv; ++i) {
      diag[i] = diag_mass_[i] * inv_dt + params_.d1 * diag_stiff_[i] +
                rmem_coeff * diag_rmem_[i] + robin_stim_coeff_ * diag_rstim_[i];
      if (couple) diag[i] += params_.c1 * diag_s[i];
      rhs_nodal[i] = inv_dt * phi_d_[i] + params_.k1 * phi_a_[i];
    }
    mass_.matvec(rhs_nodal, b);
    SolveReport rep = pcg(apply, b, std::span<double>(phi_d_), diag, opt_.chem_tol, opt_.max_iters);
    if (!rep.converged) throw SolverError("inactive FAK solve did not converge");
  }
  warn_if_negative(phi_d_, 0, "inactive FAK");

  // active FAK; sources reuse the fresh inactive field through the same operators
  {
    std::vector<double> b(nv);
    mass_.matvec(phi_a_, b);
    scale_inplace(b, inv_dt);
    if (couple) spos_.mat.matvec_add(phi_d_, b, params_.c1);
    add_robin(phi_d_, b);

    auto apply = [&](std::span<const double> x, std::span<double> y) {
      mass_.matvec(x, y);
      scale_inplace(y, inv_dt + params_.k1);
      stiff_.matvec_add(x, y, params_.d2);
    };
    std::vector<double> diag(nv);
    for (int i = 0; i < nv; ++i)
      diag[i] = diag_mass_[i] * (inv_dt + params_.k1) + params_.d2 * diag_stiff_[i];
    SolveReport rep = pcg(apply, b, std::span<double>(phi_a_), diag, opt_.chem_tol, opt_.max_iters);
    if (!rep.converged) throw SolverError("active FAK solve did not converge");
  }
  warn_if_negative(phi_a_, 1, "active FAK");

  // active RhoA with nodal kinetics on the reaction region
  {
    std::vector<double> w4(ns), src(ns);
    for (int s = 0; s < ns; ++s) {
      const double pa = phi_a_[mesh_.bulk_of_surf[s]];
      w4[s] = params_.k4_tilde(pa);
      src[s] = params_.k5_tilde(pa, m_rho_, geo_.volume);
    }
    fill_nodal_weighted_surface_mass(react_, mesh_, w4);

    std::vector<double> b(ns);
    smass_.matvec(rho_a_, b);
    scale_inplace(b, inv_dt);
    smass_reg_.matvec_add(src, b, geo_.n_r);

    auto apply = [&](std::span<const double> x, std::span<double> y) {
      smass_.matvec(x, y);
      scale_inplace(y, inv_dt);
      sstiff_.matvec_add(x, y, params_.d3);
      react_.mat.matvec_add(x, y, 1.0);
    };
    std::vector<double> diag = react_.mat.diagonal();
    for (int s = 0; s < ns; ++s)
      diag[s] += diag_smass_[s] * inv_dt + params_.d3 * diag_sstiff_[s];
    SolveReport rep = pcg(apply, b, std::span<double>(rho_a_), diag, opt_.chem_tol, opt_.max_iters);
    if (!rep.converged) throw SolverError("active RhoA solve did not converge");
  }
  warn_if_negative(rho_a_, 2, "active RhoA");
}

StepRecord Simulator::observe(double t) {
  StepRecord r;
  r.t = t;

  auto cell_stats = [&](const std::vector<double>& c, double& mean, double& mn, double& mx) {
    double acc = 0.0;
    mn = std::numeric_limits<double>::infinity();
    mx = -mn;
    for (int e = 0; e < mesh_.n_tets(); ++e) {
      acc += mesh_.tet_vols[e] * c[e];
      mn = std::min(mn, c[e]);
      mx = std::max(mx, c[e]);
    }
    mean = acc / geo_.volume;
  };
  cell_stats(ec_e_, r.ec_mean, r.ec_min, r.ec_max);
  cell_stats(divu_e_, r.divu_mean, r.divu_min, r.divu_max);

  r.phia_mean = integrate_p1(mesh_, phi_a_) / geo_.volume;
  r.phia_min = *std::min_element(phi_a_.begin(), phi_a_.end());
  r.phia_max = *std::max_element(phi_a_.begin(), phi_a_.end());

  r.rhoa_mean = integrate_p1_surface(mesh_, mesh_.membrane, rho_a_) / geo_.surface_area;
  r.rhoa_min = *std::min_element(rho_a_.begin(), rho_a_.end());
  r.rhoa_max = *std::max_element(rho_a_.begin(), rho_a_.end());

  r.fak_mass = integrate_p1(mesh_, phi_d_) + integrate_p1(mesh_, phi_a_);

  double mu = 0.0;
  for (int v = 0; v < mesh_.n_vertices(); ++v) {
    const double* uv = &u_[3 * v];
    mu = std::max(mu, std::sqrt(uv[0] * uv[0] + uv[1] * uv[1] + uv[2] * uv[2]));
  }
  r.max_u = mu;

  mean_history_.push_back({r.ec_mean, r.divu_mean, r.phia_mean, r.rhoa_mean});
  const int n = static_cast<int>(mean_history_.size()) - 1;
  if (n >= steady_window_) {
    bool settled = true;
    for (int k = 0; k < 4 && settled; ++k) {
      const double now = mean_history_[n][k];
      const double then = mean_history_[n - steady_window_][k];
      const double denom = std::max({std::abs(now), std::abs(then), 1e-12});
      settled = std::abs(now - then) <= kSteadyRelTol * denom;
    }
    r.steady = settled;
  }
  return r;
}

void Simulator::warn_if_negative(const std::vector<double>& field, int slot, const char* name) {
  const double mn = *std::min_element(field.begin(), field.end());
  if (mn >= kNegativityFloor) return;
  ++negativity_warnings_;
  if (!warned_[slot]) {
    warned_[slot] = true;
    std::cerr << "warning: " << name << " reached " << mn
              << "; continuing without clipping\n";
  }
}

SimResult Simulator::run(const std::function<void(const Simulator&, int, double)>& on_step) {
  SimResult res;
  const int nsteps = static_cast<int>(std::ceil(opt_.t_end / opt_.dt - 1e-9));

  if (!opt_.reduced) {
    if (params_.theta > 0.0)
      elastic_->element_moduli(phi_a_, lam_e_, mu_e_, ec_e_);  // relaxation starts undeformed
    else
      solve_mechanics();
  }
  record_ = observe(0.0);
  res.series.push_back(record_);
  res.fak_mass_initial = record_.fak_mass;
  res.phia_mass_initial = integrate_p1(mesh_, phi_a_);
  if (on_step) on_step(*this, 0, 0.0);

  for (int n = 1; n <= nsteps; ++n) {
    if (!opt_.reduced) solve_mechanics();
    step_chemistry();
    const double t = n * opt_.dt;
    record_ = observe(t);
    res.series.push_back(record_);
    if (record_.steady && !res.reached_steady) {
      res.reached_steady = true;
      res.steady_time = t;
    }
    if (on_step) on_step(*this, n, t);
  }

  res.fak_mass_final = record_.fak_mass;
  res.phia_mass_final = integrate_p1(mesh_, phi_a_);
  res.fak_defect_predicted = opt_.dt * params_.k1 * (res.phia_mass_initial - res.phia_mass_final);
  res.negativity_warnings = negativity_warnings_;
  return res;
}

}  // namespace cellmech
