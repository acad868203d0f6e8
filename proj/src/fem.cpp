#include "cellmech/fem.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "cellmech/errors.hpp"
#include "cellmech/quadrature.hpp"

namespace cellmech {

namespace {

Vec3 bary_to_point(const std::array<Vec3, 4>& p, const std::array<double, 4>& b) {
  return p[0] * b[0] + p[1] * b[1] + p[2] * b[2] + p[3] * b[3];
}

Vec3 bary_to_point(const std::array<Vec3, 3>& p, const std::array<double, 3>& b) {
  return p[0] * b[0] + p[1] * b[1] + p[2] * b[2];
}

std::array<Vec3, 4> tet_points(const Mesh& mesh, int e) {
  const auto& t = mesh.tets[e];
  return {mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]], mesh.vertices[t[3]]};
}

std::array<Vec3, 3> tri_points(const Mesh& mesh, int t) {
  const auto& tr = mesh.tris[t];
  return {mesh.vertices[tr[0]], mesh.vertices[tr[1]], mesh.vertices[tr[2]]};
}

int surf_id(const Mesh& mesh, int v) {
  int s = mesh.surf_of_bulk[v];
  if (s < 0) throw MeshError("vertex is not on the membrane surface");
  return s;
}

// shared CSR pattern over element dof tuples plus per-element val slots
template <int N>
void build_pattern(int ndof, const std::vector<std::array<int, N>>& elems, Csr& mat,
                   std::vector<int>& slot) {
  std::vector<std::vector<int>> adj(ndof);
  for (const auto& dofs : elems)
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) adj[dofs[i]].push_back(dofs[j]);
  mat.rows = mat.cols = ndof;
  mat.rowptr.assign(ndof + 1, 0);
  for (int r = 0; r < ndof; ++r) {
    auto& row = adj[r];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    mat.rowptr[r + 1] = mat.rowptr[r] + static_cast<int>(row.size());
  }
  mat.colind.resize(mat.rowptr[ndof]);
  for (int r = 0; r < ndof; ++r)
    std::copy(adj[r].begin(), adj[r].end(), mat.colind.begin() + mat.rowptr[r]);
  mat.vals.assign(mat.colind.size(), 0.0);
  mat.symmetric = mat.spd = true;
  slot.resize(elems.size() * static_cast<std::size_t>(N) * N);
  std::size_t k = 0;
  for (const auto& dofs : elems)
    for (int i = 0; i < N; ++i) {
      auto lo = mat.colind.begin() + mat.rowptr[dofs[i]];
      auto hi = mat.colind.begin() + mat.rowptr[dofs[i] + 1];
      for (int j = 0; j < N; ++j)
        slot[k++] = static_cast<int>(std::lower_bound(lo, hi, dofs[j]) - mat.colind.begin());
    }
}

}  // namespace

Csr bulk_mass(const Mesh& mesh) {
  CooBuilder coo(mesh.n_vertices(), mesh.n_vertices());
  for (int e = 0; e < mesh.n_tets(); ++e) {
    const auto& t = mesh.tets[e];
    double v = mesh.tet_vols[e];
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) coo.add(t[a], t[b], a == b ? v / 10.0 : v / 20.0);
  }
  return coo.build(true, true);
}

Csr bulk_stiffness(const Mesh& mesh) {
  CooBuilder coo(mesh.n_vertices(), mesh.n_vertices());
  std::array<Vec3, 4> g;
  for (int e = 0; e < mesh.n_tets(); ++e) {
    const auto& t = mesh.tets[e];
    double v = tet_p1_gradients(tet_points(mesh, e), g);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) coo.add(t[a], t[b], v * dot(g[a], g[b]));
  }
  return coo.build(true, true);
}

Csr surface_mass(const Mesh& mesh, const std::vector<int>& tris, bool bulk_indexed) {
  int n = bulk_indexed ? mesh.n_vertices() : mesh.n_surf();
  CooBuilder coo(n, n);
  for (int t : tris) {
    const auto& tr = mesh.tris[t];
    double area = mesh.tri_areas[t];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        int ra = bulk_indexed ? tr[a] : surf_id(mesh, tr[a]);
        int cb = bulk_indexed ? tr[b] : surf_id(mesh, tr[b]);
        coo.add(ra, cb, a == b ? area / 6.0 : area / 12.0);
      }
  }
  return coo.build(true, true);
}

Csr surface_stiffness(const Mesh& mesh, const std::vector<int>& tris) {
  CooBuilder coo(mesh.n_surf(), mesh.n_surf());
  std::array<Vec3, 3> g;
  for (int t : tris) {
    const auto& tr = mesh.tris[t];
    double area = tri_p1_gradients(tri_points(mesh, t), g);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        coo.add(surf_id(mesh, tr[a]), surf_id(mesh, tr[b]), area * dot(g[a], g[b]));
  }
  return coo.build(true, true);
}

Csr surface_vector_mass(const Mesh& mesh, const std::vector<int>& tris) {
  CooBuilder coo(3 * mesh.n_vertices(), 3 * mesh.n_vertices());
  for (int t : tris) {
    const auto& tr = mesh.tris[t];
    double area = mesh.tri_areas[t];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double m = a == b ? area / 6.0 : area / 12.0;
        for (int d = 0; d < 3; ++d) coo.add(3 * tr[a] + d, 3 * tr[b] + d, m);
      }
  }
  return coo.build(true, true);
}

ScalarTetCache make_scalar_tet_cache(const Mesh& mesh) {
  ScalarTetCache cache;
  build_pattern<4>(mesh.n_vertices(), mesh.tets, cache.mat, cache.slot);
  return cache;
}

void fill_cell_weighted_mass(ScalarTetCache& cache, const Mesh& mesh,
                             std::span<const double> cell_w) {
  std::fill(cache.mat.vals.begin(), cache.mat.vals.end(), 0.0);
  std::size_t k = 0;
  for (int e = 0; e < mesh.n_tets(); ++e) {
    double v = mesh.tet_vols[e] * cell_w[e];
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) cache.mat.vals[cache.slot[k++]] += a == b ? v / 10.0 : v / 20.0;
  }
}

ScalarTriCache make_scalar_tri_cache(const Mesh& mesh, const std::vector<int>& tris) {
  ScalarTriCache cache;
  cache.tris = tris;
  std::vector<std::array<int, 3>> elems;
  elems.reserve(tris.size());
  for (int t : tris) {
    const auto& tr = mesh.tris[t];
    elems.push_back({surf_id(mesh, tr[0]), surf_id(mesh, tr[1]), surf_id(mesh, tr[2])});
  }
  build_pattern<3>(mesh.n_surf(), elems, cache.mat, cache.slot);
  return cache;
}

void fill_nodal_weighted_surface_mass(ScalarTriCache& cache, const Mesh& mesh,
                                      std::span<const double> nodal_w) {
  std::fill(cache.mat.vals.begin(), cache.mat.vals.end(), 0.0);
  std::size_t k = 0;
  for (int t : cache.tris) {
    const auto& tr = mesh.tris[t];
    double area = mesh.tri_areas[t];
    double w[3];
    for (int a = 0; a < 3; ++a) w[a] = nodal_w[mesh.surf_of_bulk[tr[a]]];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        // exact integrals of lam_a lam_b lam_c over a triangle: A/10, A/30, A/60
        double m = a == b ? area / 10.0 * w[a] + area / 30.0 * (w[(a + 1) % 3] + w[(a + 2) % 3])
                          : area / 30.0 * (w[a] + w[b]) + area / 60.0 * w[3 - a - b];
        cache.mat.vals[cache.slot[k++]] += m;
      }
  }
}

VectorTetCache make_vector_tet_cache(const Mesh& mesh) {
  VectorTetCache cache;
  std::vector<std::array<int, 12>> elems(mesh.n_tets());
  for (int e = 0; e < mesh.n_tets(); ++e)
    for (int a = 0; a < 4; ++a)
      for (int d = 0; d < 3; ++d) elems[e][3 * a + d] = 3 * mesh.tets[e][a] + d;
  build_pattern<12>(3 * mesh.n_vertices(), elems, cache.mat, cache.slot);
  return cache;
}

void fill_elastic_stiffness(VectorTetCache& cache, const Mesh& mesh,
                            std::span<const double> lambda_e, std::span<const double> mu_e) {
  std::fill(cache.mat.vals.begin(), cache.mat.vals.end(), 0.0);
  std::array<Vec3, 4> g;
  std::size_t k = 0;
  const double shear = kStressShearFactor / 2.0;
  for (int e = 0; e < mesh.n_tets(); ++e) {
    double v = tet_p1_gradients(tet_points(mesh, e), g);
    double lv = lambda_e[e] * v, mv = shear * mu_e[e] * v;
    for (int a = 0; a < 4; ++a)
      for (int da = 0; da < 3; ++da)
        for (int b = 0; b < 4; ++b) {
          double gg = dot(g[a], g[b]);
          for (int db = 0; db < 3; ++db) {
            double val = lv * g[a][da] * g[b][db] + mv * g[a][db] * g[b][da];
            if (da == db) val += mv * gg;
            cache.mat.vals[cache.slot[k++]] += val;
          }
        }
  }
}

std::vector<double> element_div(const Mesh& mesh, std::span<const double> u) {
  std::vector<double> div(mesh.n_tets());
  std::array<Vec3, 4> g;
  for (int e = 0; e < mesh.n_tets(); ++e) {
    tet_p1_gradients(tet_points(mesh, e), g);
    double s = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int d = 0; d < 3; ++d) s += u[3 * mesh.tets[e][a] + d] * g[a][d];
    div[e] = s;
  }
  return div;
}

std::vector<double> element_tr_sigma(const Mesh& mesh, std::span<const double> u,
                                     std::span<const double> lambda_e,
                                     std::span<const double> mu_e) {
  std::vector<double> tr = element_div(mesh, u);
  for (int e = 0; e < mesh.n_tets(); ++e)
    tr[e] *= 3.0 * lambda_e[e] + kStressShearFactor * mu_e[e];
  return tr;
}

std::vector<double> bulk_load(const Mesh& mesh, const std::function<double(Vec3)>& f,
                              int degree) {
  std::vector<double> load(mesh.n_vertices(), 0.0);
  const TetRule& rule = tet_rule(degree);
  for (int e = 0; e < mesh.n_tets(); ++e) {
    auto p = tet_points(mesh, e);
    double v = mesh.tet_vols[e];
    for (const auto& q : rule.pts) {
      double fv = f(bary_to_point(p, q.b)) * v * q.w;
      for (int a = 0; a < 4; ++a) load[mesh.tets[e][a]] += fv * q.b[a];
    }
  }
  return load;
}

std::vector<double> bulk_vector_load(const Mesh& mesh, const std::function<Vec3(Vec3)>& f,
                                     int degree) {
  std::vector<double> load(3 * mesh.n_vertices(), 0.0);
  const TetRule& rule = tet_rule(degree);
  for (int e = 0; e < mesh.n_tets(); ++e) {
    auto p = tet_points(mesh, e);
    double v = mesh.tet_vols[e];
    for (const auto& q : rule.pts) {
      Vec3 fv = f(bary_to_point(p, q.b)) * (v * q.w);
      for (int a = 0; a < 4; ++a)
        for (int d = 0; d < 3; ++d) load[3 * mesh.tets[e][a] + d] += fv[d] * q.b[a];
    }
  }
  return load;
}

std::vector<double> surface_load(const Mesh& mesh, const std::vector<int>& tris,
                                 const std::function<double(Vec3)>& f, int degree,
                                 bool bulk_indexed) {
  std::vector<double> load(bulk_indexed ? mesh.n_vertices() : mesh.n_surf(), 0.0);
  const TriRule& rule = tri_rule(degree);
  for (int t : tris) {
    auto p = tri_points(mesh, t);
    double area = mesh.tri_areas[t];
    for (const auto& q : rule.pts) {
      double fv = f(bary_to_point(p, q.b)) * area * q.w;
      for (int a = 0; a < 3; ++a) {
        int row = bulk_indexed ? mesh.tris[t][a] : surf_id(mesh, mesh.tris[t][a]);
        load[row] += fv * q.b[a];
      }
    }
  }
  return load;
}

std::vector<double> traction_load(const Mesh& mesh, const std::vector<int>& tris,
                                  const std::function<Vec3(Vec3, Vec3)>& h, int degree) {
  std::vector<double> load(3 * mesh.n_vertices(), 0.0);
  const TriRule& rule = tri_rule(degree);
  for (int t : tris) {
    auto p = tri_points(mesh, t);
    double area = mesh.tri_areas[t];
    const Vec3& n = mesh.tri_normals[t];
    for (const auto& q : rule.pts) {
      Vec3 hv = h(bary_to_point(p, q.b), n) * (area * q.w);
      for (int a = 0; a < 3; ++a)
        for (int d = 0; d < 3; ++d) load[3 * mesh.tris[t][a] + d] += hv[d] * q.b[a];
    }
  }
  return load;
}

std::vector<double> pressure_load(const Mesh& mesh, const std::vector<int>& tris,
                                  std::span<const double> surf_nodal_w, double scale) {
  std::vector<double> load(3 * mesh.n_vertices(), 0.0);
  for (int t : tris) {
    const auto& tr = mesh.tris[t];
    double area = mesh.tri_areas[t];
    const Vec3& n = mesh.tri_normals[t];
    double w[3];
    for (int a = 0; a < 3; ++a) w[a] = surf_nodal_w[surf_id(mesh, tr[a])];
    double wsum = w[0] + w[1] + w[2];
    for (int a = 0; a < 3; ++a) {
      double m = scale * area / 12.0 * (w[a] + wsum);
      for (int d = 0; d < 3; ++d) load[3 * tr[a] + d] += m * n[d];
    }
  }
  return load;
}

std::vector<double> lumped_volume_weights(const Mesh& mesh) {
  std::vector<double> w(mesh.n_vertices(), 0.0);
  for (int e = 0; e < mesh.n_tets(); ++e)
    for (int a = 0; a < 4; ++a) w[mesh.tets[e][a]] += mesh.tet_vols[e] / 4.0;
  return w;
}

std::vector<double> lumped_surface_weights(const Mesh& mesh, const std::vector<int>& tris) {
  std::vector<double> w(mesh.n_surf(), 0.0);
  for (int t : tris)
    for (int a = 0; a < 3; ++a) w[surf_id(mesh, mesh.tris[t][a])] += mesh.tri_areas[t] / 3.0;
  return w;
}

double integrate_p1(const Mesh& mesh, std::span<const double> nodal) {
  double s = 0.0;
  for (int e = 0; e < mesh.n_tets(); ++e) {
    double q = 0.0;
    for (int a = 0; a < 4; ++a) q += nodal[mesh.tets[e][a]];
    s += q * mesh.tet_vols[e] / 4.0;
  }
  return s;
}

double integrate_p1_surface(const Mesh& mesh, const std::vector<int>& tris,
                            std::span<const double> surf_nodal) {
  double s = 0.0;
  for (int t : tris) {
    double q = 0.0;
    for (int a = 0; a < 3; ++a) q += surf_nodal[surf_id(mesh, mesh.tris[t][a])];
    s += q * mesh.tri_areas[t] / 3.0;
  }
  return s;
}

std::vector<double> interpolate(const Mesh& mesh, const std::function<double(Vec3)>& f) {
  std::vector<double> out(mesh.n_vertices());
  for (int v = 0; v < mesh.n_vertices(); ++v) out[v] = f(mesh.vertices[v]);
  return out;
}

std::vector<double> interpolate_vec(const Mesh& mesh, const std::function<Vec3(Vec3)>& f) {
  std::vector<double> out(3 * mesh.n_vertices());
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    Vec3 val = f(mesh.vertices[v]);
    for (int d = 0; d < 3; ++d) out[3 * v + d] = val[d];
  }
  return out;
}

std::vector<double> interpolate_surface(const Mesh& mesh, const std::function<double(Vec3)>& f) {
  std::vector<double> out(mesh.n_surf());
  for (int s = 0; s < mesh.n_surf(); ++s) out[s] = f(mesh.vertices[mesh.bulk_of_surf[s]]);
  return out;
}

std::vector<std::vector<double>> rigid_modes(const Mesh& mesh) {
  std::vector<std::vector<double>> modes(6, std::vector<double>(3 * mesh.n_vertices(), 0.0));
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const Vec3& p = mesh.vertices[v];
    for (int d = 0; d < 3; ++d) modes[d][3 * v + d] = 1.0;
    modes[3][3 * v + 1] = -p.z;
    modes[3][3 * v + 2] = p.y;
    modes[4][3 * v + 0] = p.z;
    modes[4][3 * v + 2] = -p.x;
    modes[5][3 * v + 0] = -p.y;
    modes[5][3 * v + 1] = p.x;
  }
  return modes;
}

std::vector<std::vector<double>> rigid_constraint_rows(const Mesh& mesh) {
  std::vector<std::vector<double>> rows(6, std::vector<double>(3 * mesh.n_vertices(), 0.0));
  std::vector<double> w = lumped_volume_weights(mesh);
  for (int v = 0; v < mesh.n_vertices(); ++v)
    for (int d = 0; d < 3; ++d) rows[d][3 * v + d] = w[v];
  // mean rotation functionals: volume integrals of d_j u_i - d_i u_j
  constexpr int pair_i[3] = {0, 0, 1}, pair_j[3] = {1, 2, 2};
  std::array<Vec3, 4> g;
  for (int e = 0; e < mesh.n_tets(); ++e) {
    double v = tet_p1_gradients(tet_points(mesh, e), g);
    for (int a = 0; a < 4; ++a)
      for (int k = 0; k < 3; ++k) {
        int i = pair_i[k], j = pair_j[k], vtx = mesh.tets[e][a];
        rows[3 + k][3 * vtx + i] += v * g[a][j];
        rows[3 + k][3 * vtx + j] -= v * g[a][i];
      }
  }
  return rows;
}

std::vector<double> remove_rigid_work(const Mesh& mesh, const std::vector<int>& tris,
                                      std::vector<double> load,
                                      const std::vector<std::vector<double>>& modes) {
  const int n = static_cast<int>(modes.size());
  // boundary mass applied to each rigid field, exact since the fields are linear
  std::vector<std::vector<double>> q(n, std::vector<double>(load.size(), 0.0));
  for (int t : tris) {
    const auto& tr = mesh.tris[t];
    double area = mesh.tri_areas[t];
    for (int k = 0; k < n; ++k)
      for (int d = 0; d < 3; ++d) {
        double w[3], wsum = 0.0;
        for (int a = 0; a < 3; ++a) {
          w[a] = modes[k][3 * tr[a] + d];
          wsum += w[a];
        }
        for (int a = 0; a < 3; ++a) q[k][3 * tr[a] + d] += area / 12.0 * (w[a] + wsum);
      }
  }
  Eigen::MatrixXd gram(n, n);
  Eigen::VectorXd rhs(n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (std::size_t i = 0; i < load.size(); ++i) s += modes[k][i] * q[l][i];
      gram(k, l) = s;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < load.size(); ++i) s += modes[k][i] * load[i];
    rhs(k) = s;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (!lu.isInvertible()) throw SolverError("rigid mode Gram matrix is singular");
  Eigen::VectorXd alpha = lu.solve(rhs);
  for (int k = 0; k < n; ++k)
    for (std::size_t i = 0; i < load.size(); ++i) load[i] -= alpha(k) * q[k][i];
  return load;
}

std::vector<double> remove_rigid_work(const Mesh& mesh, const std::vector<int>& tris,
                                      std::vector<double> load) {
  return remove_rigid_work(mesh, tris, std::move(load), rigid_modes(mesh));
}

double l2_error(const Mesh& mesh, std::span<const double> nodal,
                const std::function<double(Vec3)>& exact) {
  const TetRule& rule = tet_rule(5);
  double sq = 0.0;
  for (int e = 0; e < mesh.n_tets(); ++e) {
    auto p = tet_points(mesh, e);
    const auto& t = mesh.tets[e];
    for (const auto& q : rule.pts) {
      double num = 0.0;
      for (int a = 0; a < 4; ++a) num += nodal[t[a]] * q.b[a];
      double d = num - exact(bary_to_point(p, q.b));
      sq += mesh.tet_vols[e] * q.w * d * d;
    }
  }
  return std::sqrt(sq);
}

double h1_semi_error(const Mesh& mesh, std::span<const double> nodal,
                     const std::function<Vec3(Vec3)>& exact_grad) {
  const TetRule& rule = tet_rule(5);
  std::array<Vec3, 4> g;
  double sq = 0.0;
  for (int e = 0; e < mesh.n_tets(); ++e) {
    auto p = tet_points(mesh, e);
    const auto& t = mesh.tets[e];
    tet_p1_gradients(p, g);
    Vec3 gnum{0, 0, 0};
    for (int a = 0; a < 4; ++a) gnum += g[a] * nodal[t[a]];
    for (const auto& q : rule.pts) {
      Vec3 d = gnum + exact_grad(bary_to_point(p, q.b)) * -1.0;
      sq += mesh.tet_vols[e] * q.w * dot(d, d);
    }
  }
  return std::sqrt(sq);
}

double l2_error_vec(const Mesh& mesh, std::span<const double> nodal,
                    const std::function<Vec3(Vec3)>& exact) {
  const TetRule& rule = tet_rule(5);
  double sq = 0.0;
  for (int e = 0; e < mesh.n_tets(); ++e) {
    auto p = tet_points(mesh, e);
    const auto& t = mesh.tets[e];
    for (const auto& q : rule.pts) {
      Vec3 num{0, 0, 0};
      for (int a = 0; a < 4; ++a)
        for (int d = 0; d < 3; ++d) num[d] += nodal[3 * t[a] + d] * q.b[a];
      Vec3 diff = num + exact(bary_to_point(p, q.b)) * -1.0;
      sq += mesh.tet_vols[e] * q.w * dot(diff, diff);
    }
  }
  return std::sqrt(sq);
}

double h1_semi_error_vec(const Mesh& mesh, std::span<const double> nodal,
                         const std::function<std::array<Vec3, 3>(Vec3)>& exact_grad) {
  const TetRule& rule = tet_rule(5);
  std::array<Vec3, 4> g;
  double sq = 0.0;
  for (int e = 0; e < mesh.n_tets(); ++e) {
    auto p = tet_points(mesh, e);
    const auto& t = mesh.tets[e];
    tet_p1_gradients(p, g);
    std::array<Vec3, 3> gnum{Vec3{0, 0, 0}, Vec3{0, 0, 0}, Vec3{0, 0, 0}};
    for (int a = 0; a < 4; ++a)
      for (int d = 0; d < 3; ++d) gnum[d] += g[a] * nodal[3 * t[a] + d];
    for (const auto& q : rule.pts) {
      auto gex = exact_grad(bary_to_point(p, q.b));
      double acc = 0.0;
      for (int d = 0; d < 3; ++d) {
        Vec3 diff = gnum[d] + gex[d] * -1.0;
        acc += dot(diff, diff);
      }
      sq += mesh.tet_vols[e] * q.w * acc;
    }
  }
  return std::sqrt(sq);
}

double surface_l2_error(const Mesh& mesh, const std::vector<int>& tris,
                        std::span<const double> surf_nodal,
                        const std::function<double(Vec3)>& exact) {
  const TriRule& rule = tri_rule(5);
  double sq = 0.0;
  for (int t : tris) {
    auto p = tri_points(mesh, t);
    const auto& tr = mesh.tris[t];
    for (const auto& q : rule.pts) {
      double num = 0.0;
      for (int a = 0; a < 3; ++a) num += surf_nodal[surf_id(mesh, tr[a])] * q.b[a];
      double d = num - exact(bary_to_point(p, q.b));
      sq += mesh.tri_areas[t] * q.w * d * d;
    }
  }
  return std::sqrt(sq);
}

double surface_h1_semi_error(const Mesh& mesh, const std::vector<int>& tris,
                             std::span<const double> surf_nodal,
                             const std::function<Vec3(Vec3)>& exact_grad) {
  const TriRule& rule = tri_rule(5);
  std::array<Vec3, 3> g;
  double sq = 0.0;
  for (int t : tris) {
    auto p = tri_points(mesh, t);
    const auto& tr = mesh.tris[t];
    tri_p1_gradients(p, g);
    const Vec3& n = mesh.tri_normals[t];
    Vec3 gnum{0, 0, 0};
    for (int a = 0; a < 3; ++a) gnum += g[a] * surf_nodal[surf_id(mesh, tr[a])];
    for (const auto& q : rule.pts) {
      Vec3 ge = exact_grad(bary_to_point(p, q.b));
      Vec3 gt = ge + n * -dot(n, ge);  // tangential part on the facet plane
      Vec3 diff = gnum + gt * -1.0;
      sq += mesh.tri_areas[t] * q.w * dot(diff, diff);
    }
  }
  return std::sqrt(sq);
}

}  // namespace cellmech
