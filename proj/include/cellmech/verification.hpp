#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "cellmech/geometry.hpp"

namespace cellmech {

// Closed-form reference fields for the convergence benchmark on the unit
// ball, with unit Lame constants, and the source terms that make them exact
// solutions of the simplified coupled system
//   -div sigma(u) = f,  sigma(u) nu = sigma(u_ex) nu,
//   dphi/dt - lap(phi) = tr(sigma(u))_+ + q1,   grad(phi).nu = rho - phi + q3,
//   drho/dt - lapS(rho) + rho = phi + q2.
// All fields share the separable factor exp(-4t).
struct Manufactured {
  static double time_factor(double t);

  static Vec3 u(Vec3 p, double t);
  static std::array<Vec3, 3> grad_u(Vec3 p, double t);  // gradient per component
  static double div_u(Vec3 p, double t);
  static double tr_sigma(Vec3 p, double t);
  static Vec3 body_force(Vec3 p, double t);
  static Vec3 traction(Vec3 p, Vec3 n, double t);  // sigma(u_ex) n

  static double phi(Vec3 p, double t);
  static Vec3 grad_phi(Vec3 p, double t);
  static double q1(Vec3 p, double t);

  static double rho(Vec3 p, double t);
  static Vec3 grad_rho(Vec3 p, double t);  // ambient gradient
  static double q2(Vec3 p, double t);      // derived on the unit sphere
  static double q3(Vec3 p, double t);      // Robin mismatch of the printed pair
};

struct BenchmarkOptions {
  std::vector<int> levels = {0, 1, 2, 3};
  double t_end = 1.0;
  double dt_factor = 1.0;  // dt ~ dt_factor * h^2, rounded to divide t_end
  double tol = 1e-10;
  int max_iters = 200000;
  bool interpolation_only = false;  // inject exact fields, skip time stepping
};

struct LevelErrors {
  int level = 0;
  double h = 0.0;
  double dt = 0.0;
  int steps = 0;
  double phi_l2 = 0.0, phi_h1 = 0.0;
  double rho_l2 = 0.0, rho_h1 = 0.0;
  double u_l2 = 0.0, u_h1 = 0.0;
};

double eoc(double err_coarse, double err_fine, double h_coarse, double h_fine);

struct EocReport {
  std::vector<LevelErrors> rows;

  // columns: phi_l2, phi_h1, rho_l2, rho_h1, u_l2, u_h1; one row per
  // consecutive level pair
  [[nodiscard]] std::vector<std::array<double, 6>> eoc_table() const;

  void write_errors_csv(std::ostream& os) const;
  void write_eoc_csv(std::ostream& os) const;
  void print_table(std::ostream& os) const;
};

LevelErrors run_benchmark_level(int level, const BenchmarkOptions& opt);
EocReport run_benchmark(const BenchmarkOptions& opt);

}  // namespace cellmech
