#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "cellmech/csr.hpp"
#include "cellmech/geometry.hpp"
#include "cellmech/mesh.hpp"

namespace cellmech {

// stress form: sigma(u) = lambda tr(eps) I + kStressShearFactor mu eps(u).
// 2 is the standard isotropic form; defining CELLMECH_DOUBLED_SHEAR selects
// the doubled-shear variant with tr(sigma) = (3 lambda + 4 mu) div u.
#ifdef CELLMECH_DOUBLED_SHEAR
inline constexpr double kStressShearFactor = 4.0;
#else
inline constexpr double kStressShearFactor = 2.0;
#endif

// scalar P1 operators on the bulk mesh (one dof per vertex)
Csr bulk_mass(const Mesh& mesh);
Csr bulk_stiffness(const Mesh& mesh);

// scalar P1 operators on a set of boundary triangles; dofs are surface ids
// unless bulk_indexed, in which case rows/cols use bulk vertex ids
Csr surface_mass(const Mesh& mesh, const std::vector<int>& tris, bool bulk_indexed = false);
Csr surface_stiffness(const Mesh& mesh, const std::vector<int>& tris);

// vector-valued boundary mass on bulk dofs (3v+d), block diagonal across components
Csr surface_vector_mass(const Mesh& mesh, const std::vector<int>& tris);

// matrices that are refilled every time step share one sparsity pattern;
// slot maps each element's local block to positions in mat.vals
struct ScalarTetCache {
  Csr mat;
  std::vector<int> slot;  // 16 per tet
};
ScalarTetCache make_scalar_tet_cache(const Mesh& mesh);
void fill_cell_weighted_mass(ScalarTetCache& cache, const Mesh& mesh,
                             std::span<const double> cell_w);

struct ScalarTriCache {
  Csr mat;  // surface ids
  std::vector<int> slot;  // 9 per listed triangle
  std::vector<int> tris;
};
ScalarTriCache make_scalar_tri_cache(const Mesh& mesh, const std::vector<int>& tris);
void fill_nodal_weighted_surface_mass(ScalarTriCache& cache, const Mesh& mesh,
                                      std::span<const double> nodal_w);

struct VectorTetCache {
  Csr mat;  // bulk vector dofs
  std::vector<int> slot;  // 144 per tet
};
VectorTetCache make_vector_tet_cache(const Mesh& mesh);
void fill_elastic_stiffness(VectorTetCache& cache, const Mesh& mesh,
                            std::span<const double> lambda_e, std::span<const double> mu_e);

// piecewise-constant derived fields of a displacement vector (3 dofs per vertex)
std::vector<double> element_div(const Mesh& mesh, std::span<const double> u);
std::vector<double> element_tr_sigma(const Mesh& mesh, std::span<const double> u,
                                     std::span<const double> lambda_e,
                                     std::span<const double> mu_e);

// load assembly; callables receive physical coordinates
std::vector<double> bulk_load(const Mesh& mesh, const std::function<double(Vec3)>& f,
                              int degree = 5);
std::vector<double> bulk_vector_load(const Mesh& mesh, const std::function<Vec3(Vec3)>& f,
                                     int degree = 5);
std::vector<double> surface_load(const Mesh& mesh, const std::vector<int>& tris,
                                 const std::function<double(Vec3)>& f, int degree = 5,
                                 bool bulk_indexed = false);
// traction h(x, n) with n the unit facet normal; assembles into bulk vector dofs
std::vector<double> traction_load(const Mesh& mesh, const std::vector<int>& tris,
                                  const std::function<Vec3(Vec3, Vec3)>& h, int degree = 5);
// normal pressure scale * w(x) * n with w a P1 surface field, integrated exactly
std::vector<double> pressure_load(const Mesh& mesh, const std::vector<int>& tris,
                                  std::span<const double> surf_nodal_w, double scale);

// exact integrals of P1 fields (lumped weights are exact for linear integrands)
std::vector<double> lumped_volume_weights(const Mesh& mesh);
std::vector<double> lumped_surface_weights(const Mesh& mesh, const std::vector<int>& tris);
double integrate_p1(const Mesh& mesh, std::span<const double> nodal);
double integrate_p1_surface(const Mesh& mesh, const std::vector<int>& tris,
                            std::span<const double> surf_nodal);

// nodal interpolation
std::vector<double> interpolate(const Mesh& mesh, const std::function<double(Vec3)>& f);
std::vector<double> interpolate_vec(const Mesh& mesh, const std::function<Vec3(Vec3)>& f);
std::vector<double> interpolate_surface(const Mesh& mesh, const std::function<double(Vec3)>& f);

// rigid body machinery: six nodal fields spanning translations and rotations,
// the matching mean-displacement and mean-rotation functionals, and removal of
// rigid work from a boundary load by subtracting an L2 combination of the fields
std::vector<std::vector<double>> rigid_modes(const Mesh& mesh);
std::vector<std::vector<double>> rigid_constraint_rows(const Mesh& mesh);
std::vector<double> remove_rigid_work(const Mesh& mesh, const std::vector<int>& tris,
                                      std::vector<double> load);
// same, but projecting only the given rigid fields out of the load
std::vector<double> remove_rigid_work(const Mesh& mesh, const std::vector<int>& tris,
                                      std::vector<double> load,
                                      const std::vector<std::vector<double>>& modes);

// errors of P1 fields against smooth references, fifth degree quadrature
double l2_error(const Mesh& mesh, std::span<const double> nodal,
                const std::function<double(Vec3)>& exact);
double h1_semi_error(const Mesh& mesh, std::span<const double> nodal,
                     const std::function<Vec3(Vec3)>& exact_grad);
double l2_error_vec(const Mesh& mesh, std::span<const double> nodal,
                    const std::function<Vec3(Vec3)>& exact);
// exact_grad returns the gradient of each displacement component
double h1_semi_error_vec(const Mesh& mesh, std::span<const double> nodal,
                         const std::function<std::array<Vec3, 3>(Vec3)>& exact_grad);
double surface_l2_error(const Mesh& mesh, const std::vector<int>& tris,
                        std::span<const double> surf_nodal,
                        const std::function<double(Vec3)>& exact);
// the full reference gradient is projected onto each facet plane
double surface_h1_semi_error(const Mesh& mesh, const std::vector<int>& tris,
                             std::span<const double> surf_nodal,
                             const std::function<Vec3(Vec3)>& exact_grad);

}  // namespace cellmech
