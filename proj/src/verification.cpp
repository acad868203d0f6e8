#include "cellmech/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "cellmech/cg.hpp"
#include "cellmech/elasticity.hpp"
#include "cellmech/errors.hpp"
#include "cellmech/fem.hpp"
#include "cellmech/mesh.hpp"
#include "cellmech/model.hpp"

namespace cellmech {

namespace {

constexpr double kF = kStressShearFactor;

// spatial strain of the reference displacement (time factor stripped)
std::array<Vec3, 3> grad_u_spatial(Vec3 p) {
  const double x = p.x, y = p.y, z = p.z;
  return {Vec3{4 * x * y * z, 2 * x * x * z, 2 * x * x * y},
          Vec3{-y * y * z, -2 * x * y * z, -x * y * y},
          Vec3{-2 * y * z * z, -2 * x * z * z, -4 * x * y * z}};
}

Vec3 sigma_dot_n(Vec3 p, Vec3 n) {
  const auto g = grad_u_spatial(p);
  const double div = g[0].x + g[1].y + g[2].z;
  Vec3 r{div * n.x, div * n.y, div * n.z};
  for (int i = 0; i < 3; ++i) {
    const double ni[3] = {n.x, n.y, n.z};
    double s = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double gij = (j == 0 ? g[i].x : (j == 1 ? g[i].y : g[i].z));
      const double gji = (i == 0 ? g[j].x : (i == 1 ? g[j].y : g[j].z));
      s += 0.5 * kF * (gij + gji) * ni[j];
    }
    (i == 0 ? r.x : (i == 1 ? r.y : r.z)) += s;
  }
  return r;
}

}  // namespace

double Manufactured::time_factor(double t) { return std::exp(-4.0 * t); }

Vec3 Manufactured::u(Vec3 p, double t) {
  const double e = time_factor(t);
  return {2 * p.x * p.x * p.y * p.z * e, -p.x * p.y * p.y * p.z * e,
          -2 * p.x * p.y * p.z * p.z * e};
}

std::array<Vec3, 3> Manufactured::grad_u(Vec3 p, double t) {
  auto g = grad_u_spatial(p);
  const double e = time_factor(t);
  for (auto& row : g) {
    row.x *= e;
    row.y *= e;
    row.z *= e;
  }
  return g;
}

double Manufactured::div_u(Vec3 p, double t) { return -2 * p.x * p.y * p.z * time_factor(t); }

double Manufactured::tr_sigma(Vec3 p, double t) { return (3.0 + kF) * div_u(p, t); }

Vec3 Manufactured::body_force(Vec3 p, double t) {
  const double e = time_factor(t);
  return {(2.0 - kF) * p.y * p.z * e, (2.0 + 2.0 * kF) * p.x * p.z * e,
          (2.0 + 3.0 * kF) * p.x * p.y * e};
}

Vec3 Manufactured::traction(Vec3 p, Vec3 n, double t) {
  Vec3 r = sigma_dot_n(p, n);
  const double e = time_factor(t);
  return {r.x * e, r.y * e, r.z * e};
}

double Manufactured::phi(Vec3 p, double t) {
  return std::cos(p.x * p.y * p.z) * time_factor(t);
}

Vec3 Manufactured::grad_phi(Vec3 p, double t) {
  const double s = p.x * p.y * p.z;
  const double c = -std::sin(s) * time_factor(t);
  return {c * p.y * p.z, c * p.x * p.z, c * p.x * p.y};
}

double Manufactured::q1(Vec3 p, double t) {
  const double s = p.x * p.y * p.z;
  const double pp = p.x * p.x * p.y * p.y + p.x * p.x * p.z * p.z + p.y * p.y * p.z * p.z;
  return (pp - 4.0) * std::cos(s) * time_factor(t) - std::max(tr_sigma(p, t), 0.0);
}

double Manufactured::rho(Vec3 p, double t) {
  const double s = p.x * p.y * p.z;
  return (std::cos(s) - 3.0 * std::sin(s)) * time_factor(t);
}

Vec3 Manufactured::grad_rho(Vec3 p, double t) {
  const double s = p.x * p.y * p.z;
  const double c = (-std::sin(s) - 3.0 * std::cos(s)) * time_factor(t);
  return {c * p.y * p.z, c * p.x * p.z, c * p.x * p.y};
}

double Manufactured::q2(Vec3 p, double t) {
  // on the unit sphere  lapS g(s) = g''(s)(P - 9 s^2) - 12 s g'(s),  s = xyz
  const double s = p.x * p.y * p.z;
  const double pp = p.x * p.x * p.y * p.y + p.x * p.x * p.z * p.z + p.y * p.y * p.z * p.z;
  const double rh = std::cos(s) - 3.0 * std::sin(s);
  const double rh1 = -std::sin(s) - 3.0 * std::cos(s);
  const double lap_s = -rh * (pp - 9.0 * s * s) - 12.0 * s * rh1;  // g'' = -g
  return (-4.0 * rh - lap_s + rh - std::cos(s)) * time_factor(t);
}

double Manufactured::q3(Vec3 p, double t) {
  const double s = p.x * p.y * p.z;
  return 3.0 * (1.0 - s) * std::sin(s) * time_factor(t);
}

double eoc(double err_coarse, double err_fine, double h_coarse, double h_fine) {
  return std::log(err_coarse / err_fine) / std::log(h_coarse / h_fine);
}

LevelErrors run_benchmark_level(int level, const BenchmarkOptions& opt) {
  const Mesh mesh = generate_unit_ball(level);
  const MeshGeometry geo = geometry(mesh);
  const double t_end = opt.t_end;

  LevelErrors out;
  out.level = level;
  out.h = geo.h;

  const int nv = mesh.n_vertices();
  const int ns = mesh.n_surf();

  std::vector<double> phi(nv), rho(ns), u(3 * nv, 0.0);

  if (opt.interpolation_only) {
    phi = interpolate(mesh, [&](Vec3 p) { return Manufactured::phi(p, t_end); });
    rho = interpolate_surface(mesh, [&](Vec3 p) { return Manufactured::rho(p, t_end); });
    std::vector<double> ui =
        interpolate_vec(mesh, [&](Vec3 p) { return Manufactured::u(p, t_end); });
    u = ui;
  } else {
    // keep dt proportional to h^2 as closely as integer step counts allow, so
    // the first-order temporal term scales at the same rate as the spatial one
    const int nsteps =
        std::max(1, static_cast<int>(std::llround(t_end / (opt.dt_factor * geo.h * geo.h))));
    const double dt = t_end / nsteps;
    out.dt = dt;
    out.steps = nsteps;

    Csr mass = bulk_mass(mesh);
    Csr stiff = bulk_stiffness(mesh);
    Csr rob = surface_mass(mesh, mesh.membrane, /*bulk_indexed=*/true);
    Csr smass = surface_mass(mesh, mesh.membrane);
    Csr sstiff = surface_stiffness(mesh, mesh.membrane);
    const std::vector<double> dm = mass.diagonal(), dk = stiff.diagonal(), dr = rob.diagonal();
    const std::vector<double> dsm = smass.diagonal(), dsk = sstiff.diagonal();

    ModelParams ep;  // only theta matters for the solver; keep the elastic path
    Scenario esc;
    esc.attachment = Attachment::PureTraction;
    ElasticSolver elastic(mesh, ep, esc, opt.tol, opt.max_iters);
    const std::vector<double> lam(mesh.n_tets(), 1.0), mu(mesh.n_tets(), 1.0);

    // all sources share the exp(-4t) factor: assemble spatial loads once
    std::vector<double> load0 =
        bulk_vector_load(mesh, [](Vec3 p) { return Manufactured::body_force(p, 0.0); });
    {
      std::vector<double> trac = traction_load(
          mesh, mesh.membrane, [](Vec3 p, Vec3 n) { return Manufactured::traction(p, n, 0.0); });
      for (int i = 0; i < 3 * nv; ++i) load0[i] += trac[i];
    }
    const std::vector<double> q1_0 =
        bulk_load(mesh, [](Vec3 p) { return Manufactured::q1(p, 0.0); });
    const std::vector<double> q3_0 =
        surface_load(mesh, mesh.membrane, [](Vec3 p) { return Manufactured::q3(p, 0.0); }, 5,
                     /*bulk_indexed=*/true);
    const std::vector<double> q2_0 =
        surface_load(mesh, mesh.membrane, [](Vec3 p) { return Manufactured::q2(p, 0.0); });

    phi = interpolate(mesh, [](Vec3 p) { return Manufactured::phi(p, 0.0); });
    rho = interpolate_surface(mesh, [](Vec3 p) { return Manufactured::rho(p, 0.0); });

    const double step_factor = std::exp(-4.0 * dt);
    std::vector<double> trs(mesh.n_tets());
    std::vector<double> b(nv), rho_bulk(nv, 0.0), br(ns), phi_surf(ns);

    for (int n = 1; n <= nsteps; ++n) {
      const double s = Manufactured::time_factor(n * dt);

      // quasi-static mechanics at the new time; decay predictor warm start
      std::vector<double> load(load0);
      for (double& v : load) v *= s;
      for (double& v : u) v *= step_factor;
      SolveReport mrep = elastic.solve(lam, mu, std::move(load), u);
      if (!mrep.converged) throw SolverError("benchmark mechanics solve did not converge");

      trs = element_tr_sigma(mesh, u, lam, mu);
      for (double& v : trs) v = std::max(v, 0.0);

      // bulk species, implicit with the membrane Robin mass on the left
      mass.matvec(phi, b);
      const double inv_dt = 1.0 / dt;
      for (double& v : b) v *= inv_dt;
      for (int e = 0; e < mesh.n_tets(); ++e) {
        const double w = trs[e] * mesh.tet_vols[e] / 4.0;
        for (int a = 0; a < 4; ++a) b[mesh.tets[e][a]] += w;
      }
      for (int s_id = 0; s_id < ns; ++s_id) rho_bulk[mesh.bulk_of_surf[s_id]] = rho[s_id];
      rob.matvec_add(rho_bulk, b, 1.0);
      for (int i = 0; i < nv; ++i) b[i] += s * (q1_0[i] + q3_0[i]);

      auto apply_phi = [&](std::span<const double> xx, std::span<double> yy) {
        mass.matvec(xx, yy);
        for (double& v : yy) v *= inv_dt;
        stiff.matvec_add(xx, yy, 1.0);
        rob.matvec_add(xx, yy, 1.0);
      };
      std::vector<double> diag(nv);
      for (int i = 0; i < nv; ++i) diag[i] = dm[i] * inv_dt + dk[i] + dr[i];
      SolveReport prep = pcg(apply_phi, b, std::span<double>(phi), diag, opt.tol, opt.max_iters);
      if (!prep.converged) throw SolverError("benchmark bulk solve did not converge");

      // surface species, fed by the fresh bulk trace
      for (int s_id = 0; s_id < ns; ++s_id) phi_surf[s_id] = phi[mesh.bulk_of_surf[s_id]];
      smass.matvec(rho, br);
      for (double& v : br) v *= inv_dt;
      smass.matvec_add(phi_surf, br, 1.0);
      for (int i = 0; i < ns; ++i) br[i] += s * q2_0[i];

      auto apply_rho = [&](std::span<const double> xx, std::span<double> yy) {
        smass.matvec(xx, yy);
        for (double& v : yy) v *= inv_dt + 1.0;
        sstiff.matvec_add(xx, yy, 1.0);
      };
      std::vector<double> sdiag(ns);
      for (int i = 0; i < ns; ++i) sdiag[i] = dsm[i] * (inv_dt + 1.0) + dsk[i];
      SolveReport rrep = pcg(apply_rho, br, std::span<double>(rho), sdiag, opt.tol, opt.max_iters);
      if (!rrep.converged) throw SolverError("benchmark surface solve did not converge");
    }
  }

  auto sq = [](double v) { return v * v; };
  const double phi_l2 =
      l2_error(mesh, phi, [&](Vec3 p) { return Manufactured::phi(p, t_end); });
  const double phi_h1s =
      h1_semi_error(mesh, phi, [&](Vec3 p) { return Manufactured::grad_phi(p, t_end); });
  const double rho_l2 = surface_l2_error(mesh, mesh.membrane, rho,
                                         [&](Vec3 p) { return Manufactured::rho(p, t_end); });
  const double rho_h1s = surface_h1_semi_error(
      mesh, mesh.membrane, rho, [&](Vec3 p) { return Manufactured::grad_rho(p, t_end); });
  const double u_l2 = l2_error_vec(mesh, u, [&](Vec3 p) { return Manufactured::u(p, t_end); });
  const double u_h1s =
      h1_semi_error_vec(mesh, u, [&](Vec3 p) { return Manufactured::grad_u(p, t_end); });

  out.phi_l2 = phi_l2;
  out.phi_h1 = std::sqrt(sq(phi_l2) + sq(phi_h1s));
  out.rho_l2 = rho_l2;
  out.rho_h1 = std::sqrt(sq(rho_l2) + sq(rho_h1s));
  out.u_l2 = u_l2;
  out.u_h1 = std::sqrt(sq(u_l2) + sq(u_h1s));
  return out;
}

EocReport run_benchmark(const BenchmarkOptions& opt) {
  if (opt.levels.size() < 2) throw ConfigError("benchmark needs at least two levels");
  EocReport rep;
  for (int level : opt.levels) rep.rows.push_back(run_benchmark_level(level, opt));
  return rep;
}

std::vector<std::array<double, 6>> EocReport::eoc_table() const {
  std::vector<std::array<double, 6>> t;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const LevelErrors& c = rows[i - 1];
    const LevelErrors& f = rows[i];
    t.push_back({eoc(c.phi_l2, f.phi_l2, c.h, f.h), eoc(c.phi_h1, f.phi_h1, c.h, f.h),
                 eoc(c.rho_l2, f.rho_l2, c.h, f.h), eoc(c.rho_h1, f.rho_h1, c.h, f.h),
                 eoc(c.u_l2, f.u_l2, c.h, f.h), eoc(c.u_h1, f.u_h1, c.h, f.h)});
  }
  return t;
}

namespace {

void csv_row(std::ostream& os, const LevelErrors& r) {
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "%d,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.level, r.h, r.dt,
                r.steps, r.phi_l2, r.phi_h1, r.rho_l2, r.rho_h1, r.u_l2, r.u_h1);
  os << buf;
}

}  // namespace

void EocReport::write_errors_csv(std::ostream& os) const {
  os << "level,h,dt,steps,phi_l2,phi_h1,rho_l2,rho_h1,u_l2,u_h1\n";
  for (const LevelErrors& r : rows) csv_row(os, r);
}

void EocReport::write_eoc_csv(std::ostream& os) const {
  os << "level_coarse,level_fine,phi_l2,phi_h1,rho_l2,rho_h1,u_l2,u_h1\n";
  const auto t = eoc_table();
  for (std::size_t i = 0; i < t.size(); ++i) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  rows[i].level, rows[i + 1].level, t[i][0], t[i][1], t[i][2], t[i][3], t[i][4],
                  t[i][5]);
    os << buf;
  }
}

void EocReport::print_table(std::ostream& os) const {
  char buf[320];
  os << "level      h       dt  steps    phi_l2    phi_h1    rho_l2    rho_h1      u_l2      u_h1\n";
  for (const LevelErrors& r : rows) {
    std::snprintf(buf, sizeof buf, "%5d %6.4f %8.5f %6d %9.3e %9.3e %9.3e %9.3e %9.3e %9.3e\n",
                  r.level, r.h, r.dt, r.steps, r.phi_l2, r.phi_h1, r.rho_l2, r.rho_h1, r.u_l2,
                  r.u_h1);
    os << buf;
  }
  const auto t = eoc_table();
  if (t.empty()) return;
  os << "eoc pair        phi_l2    phi_h1    rho_l2    rho_h1      u_l2      u_h1\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%5d->%-5d    %6.3f    %6.3f    %6.3f    %6.3f    %6.3f    %6.3f\n",
                  rows[i].level, rows[i + 1].level, t[i][0], t[i][1], t[i][2], t[i][3], t[i][4],
                  t[i][5]);
    os << buf;
  }
}

}  // namespace cellmech
