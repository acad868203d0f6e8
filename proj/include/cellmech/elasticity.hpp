#pragma once

#include <span>
#include <vector>

#include "cellmech/cg.hpp"
#include "cellmech/fem.hpp"
#include "cellmech/mesh.hpp"
#include "cellmech/model.hpp"

namespace cellmech {

// Quasi-static linear (visco)elasticity with rigid body motion removed per the
// chosen attachment. PureTraction projects boundary loads onto the complement
// of the rigid modes and pins the six mean displacement and rotation
// functionals. PartiallyFixed clamps the normal displacement on the bottom
// patch and pins the remaining in-plane modes. NucleusRobin adds an elastic
// anchoring term omega u on the nucleus surface, which makes the operator
// definite without constraints.
class ElasticSolver {
 public:
  ElasticSolver(const Mesh& mesh, const ModelParams& params, const Scenario& scenario,
                double tol = 1e-10, int max_iters = 50000);

  // per-element moduli from the active FAK field (or the constant law)
  void element_moduli(std::span<const double> phi_a_nodal, std::vector<double>& lambda_e,
                      std::vector<double>& mu_e, std::vector<double>& ec_e) const;

  // quasi-static solve; u is the warm start and receives the solution
  SolveReport solve(std::span<const double> lambda_e, std::span<const double> mu_e,
                    std::vector<double> load, std::vector<double>& u);

  // one implicit stress-relaxation step of size dt: the operator is scaled by
  // (1 + theta/dt) and the previous displacement enters the right hand side;
  // theta = 0 reduces exactly to the elastic solve
  SolveReport step_viscoelastic(std::span<const double> lambda_e, std::span<const double> mu_e,
                                std::vector<double> load, double dt, std::vector<double>& u);

  // boundary facets that carry the membrane load for this attachment
  [[nodiscard]] const std::vector<int>& load_tris() const { return load_tris_; }

  [[nodiscard]] const Csr& operator_matrix() const { return cache_.mat; }

 private:
  SolveReport run(std::span<const double> lambda_e, std::span<const double> mu_e,
                  std::vector<double> load, double theta, double dt, std::vector<double>& u);
  void assemble(std::span<const double> lambda_e, std::span<const double> mu_e, double scale);

  const Mesh& mesh_;
  ModelParams params_;
  Scenario scenario_;
  double tol_;
  int max_iters_;

  VectorTetCache cache_;
  Csr robin_;  // nucleus anchoring mass, empty otherwise
  std::vector<int> load_tris_;
  std::vector<std::vector<double>> rows_;    // pinned functionals
  std::vector<std::vector<double>> kernel_;  // matching kernel fields
  std::vector<int> fixed_;                   // clamped dofs (normal on bottom patch)
  std::vector<int> zero_slots_;              // val positions cleared by clamping
  std::vector<int> fixed_diag_slots_;

  // refill memo for the purely elastic path
  std::vector<double> memo_lambda_, memo_mu_;
  double memo_scale_ = 0.0;
  bool filled_ = false;
};

}  // namespace cellmech
