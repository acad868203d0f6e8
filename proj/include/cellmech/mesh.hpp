#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "cellmech/geometry.hpp"

namespace cellmech {

struct MeshGeometry {
  double volume = 0.0;        // |Y|, um^3
  double surface_area = 0.0;  // |Gamma| (membrane), um^2
  double bottom_area = 0.0;   // |Gamma0|, um^2
  double n_r = 0.0;           // |Y|/|Gamma|, um
  double h = 0.0;             // max element diameter, um
};

// Tetrahedral bulk mesh with the extracted, outward-oriented boundary
// triangulation. The membrane (chemistry surface) is the boundary minus any
// "nucleus"-tagged triangles. Immutable after construction apart from region
// tagging; safe for concurrent reads.
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;

  // derived boundary data
  std::vector<std::array<int, 3>> tris;  // bulk vertex ids, outward orientation
  std::vector<int> tri_owner;
  std::vector<Vec3> tri_normals;
  std::vector<double> tri_areas;
  std::vector<double> tet_vols;

  std::map<std::string, std::vector<int>> regions;  // tag -> sorted tri ids
  std::vector<int> membrane;                        // tri ids of the chemistry surface
  std::vector<int> surf_of_bulk;                    // bulk vertex -> surface index, -1 off-membrane
  std::vector<int> bulk_of_surf;

  [[nodiscard]] int n_vertices() const { return static_cast<int>(vertices.size()); }
  [[nodiscard]] int n_tets() const { return static_cast<int>(tets.size()); }
  [[nodiscard]] int n_tris() const { return static_cast<int>(tris.size()); }
  [[nodiscard]] int n_surf() const { return static_cast<int>(bulk_of_surf.size()); }

  [[nodiscard]] bool has_region(const std::string& name) const { return regions.count(name) > 0; }
  [[nodiscard]] const std::vector<int>& region(const std::string& name) const;
  // vertices incident to a region's triangles
  [[nodiscard]] std::vector<int> region_vertices(const std::string& name) const;
};

// Construct a mesh from raw cells: fixes tet orientation, extracts and orients the
// boundary, resolves named surface triangle sets (e.g. "nucleus") against it.
Mesh build_mesh(std::vector<Vec3> verts, std::vector<std::array<int, 4>> tets,
                const std::map<std::string, std::vector<std::array<int, 3>>>& named_surfaces = {});

// Structured unit-ball mesh; successive levels shrink h by ~0.5-0.7, with
// level 0 in [0.5, 0.7] and level 3 in [0.10, 0.16].
Mesh generate_unit_ball(int refinement_level);

// Axisymmetric dome (half-ellipsoid, flat base at x3 = 0). Defaults hit the
// target cell volume and membrane area.
inline constexpr double kDomeBaseRadius = 12.17228934837652;   // um
inline constexpr double kDomeHeight = 3.8444772486485403;      // um
inline constexpr int kDomeRefinement = 6;
Mesh generate_cell_dome(double base_radius, double height, int refinement);

// MSH ASCII v2.2 reader; element types 2 (tri, physical-tagged) and 4 (tet).
Mesh load_msh(const std::string& path);

// Tag boundary triangles whose vertices all satisfy |x3| <= tol as "Gamma0".
// Returns the number of tagged triangles. Default tol is 1e-6 * h.
int tag_bottom(Mesh& mesh, double tol);
int tag_bottom(Mesh& mesh);

MeshGeometry geometry(const Mesh& mesh);

// Check all structural invariants; throws MeshError on violation.
void validate(const Mesh& mesh);

}  // namespace cellmech
