#include "cellmech/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "cellmech/errors.hpp"

using namespace cellmech;

namespace {

constexpr double kPi = std::numbers::pi;

// minimal MSH v2.2 writer for roundtrip tests
void write_msh(const std::string& path, const Mesh& mesh,
               const std::map<std::string, std::vector<int>>& tri_regions = {},
               bool flip_first_tet = false) {
  std::ofstream out(path);
  out.precision(17);
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  if (!tri_regions.empty()) {
    out << "$PhysicalNames\n" << tri_regions.size() << "\n";
    int tag = 1;
    for (const auto& [name, ids] : tri_regions) out << "2 " << tag++ << " \"" << name << "\"\n";
    out << "$EndPhysicalNames\n";
  }
  out << "$Nodes\n" << mesh.n_vertices() << "\n";
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const Vec3& p = mesh.vertices[v];
    out << (v + 1) << " " << p.x << " " << p.y << " " << p.z << "\n";
  }
  out << "$EndNodes\n$Elements\n";
  std::size_t ntris = 0;
  for (const auto& [name, ids] : tri_regions) ntris += ids.size();
  out << (mesh.n_tets() + ntris) << "\n";
  long id = 1;
  int tag = 1;
  for (const auto& [name, ids] : tri_regions) {
    for (int t : ids) {
      const auto& tri = mesh.tris[t];
      out << id++ << " 2 2 " << tag << " 1 " << (tri[0] + 1) << " " << (tri[1] + 1) << " "
          << (tri[2] + 1) << "\n";
    }
    ++tag;
  }
  for (int e = 0; e < mesh.n_tets(); ++e) {
    auto t = mesh.tets[e];
    if (e == 0 && flip_first_tet) std::swap(t[0], t[1]);
    out << id++ << " 4 2 1 1 " << (t[0] + 1) << " " << (t[1] + 1) << " " << (t[2] + 1) << " "
        << (t[3] + 1) << "\n";
  }
  out << "$EndElements\n";
}

Mesh reference_simplex() {
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  return build_mesh(v, {{0, 1, 2, 3}});
}

}  // namespace

TEST(Mesh, UnitBallCoarseLevels) {
  double h_prev = 1e30;
  for (int level = 0; level <= 2; ++level) {
    Mesh m = generate_unit_ball(level);
    validate(m);
    MeshGeometry g = geometry(m);
    EXPECT_LT(g.h, h_prev) << "level " << level;
    h_prev = g.h;
    EXPECT_LT(std::abs(g.volume - 4.0 * kPi / 3.0), 0.12 * 4.0 * kPi / 3.0);
    // a sphere has no flat base
    EXPECT_EQ(tag_bottom(m, 1e-6), 0);
  }
  Mesh m0 = generate_unit_ball(0);
  MeshGeometry g0 = geometry(m0);
  EXPECT_GE(g0.h, 0.5);
  EXPECT_LE(g0.h, 0.7);
}

TEST(Mesh, UnitBallLevel2Accuracy) {
  Mesh m = generate_unit_ball(2);
  MeshGeometry g = geometry(m);
  EXPECT_NEAR(g.volume, 4.0 * kPi / 3.0, 0.02 * 4.0 * kPi / 3.0);
  EXPECT_NEAR(g.surface_area, 4.0 * kPi, 0.02 * 4.0 * kPi);
}

TEST(Mesh, UnitBallFinestLevelBracket) {
  Mesh m = generate_unit_ball(3);
  MeshGeometry g = geometry(m);
  EXPECT_GE(g.h, 0.10);
  EXPECT_LE(g.h, 0.16);
}

TEST(Mesh, UnitBallElementQualityStaysBounded) {
  // structured O-grid quality must not collapse under refinement
  for (int level : {0, 1, 2}) {
    Mesh m = generate_unit_ball(level);
    double qmin = 1e30;
    for (const auto& t : m.tets)
      qmin = std::min(qmin, tet_quality(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]],
                                        m.vertices[t[3]]));
    EXPECT_GT(qmin, 0.02) << "level " << level;
  }
}

TEST(Mesh, DomeDefaults) {
  Mesh m = generate_cell_dome(kDomeBaseRadius, kDomeHeight, kDomeRefinement);
  validate(m);
  MeshGeometry g = geometry(m);
  EXPECT_NEAR(g.volume, 1193.0, 0.05 * 1193.0);
  EXPECT_NEAR(g.surface_area, 1020.0, 0.05 * 1020.0);
  EXPECT_NEAR(g.n_r, 1.17, 0.05 * 1.17);
  // flat base: nothing below z=0
  for (int t = 0; t < m.n_tris(); ++t) {
    const auto& tri = m.tris[t];
    Vec3 c = (m.vertices[tri[0]] + m.vertices[tri[1]] + m.vertices[tri[2]]) * (1.0 / 3.0);
    EXPECT_GE(c.z, -1e-12);
  }
  ASSERT_TRUE(m.has_region("Gamma0"));
  double disc = kPi * kDomeBaseRadius * kDomeBaseRadius;
  EXPECT_NEAR(g.bottom_area, disc, 0.02 * disc);
  EXPECT_LE(g.bottom_area, g.surface_area);
}

TEST(Mesh, DomeHemisphere) {
  Mesh m = generate_cell_dome(1.0, 1.0, 5);
  MeshGeometry g = geometry(m);
  EXPECT_NEAR(g.volume, 2.0 * kPi / 3.0, 0.02 * 2.0 * kPi / 3.0);
}

TEST(Mesh, DomeDegenerateParameters) {
  EXPECT_THROW(generate_cell_dome(0.0, 1.0, 3), MeshError);
  EXPECT_THROW(generate_cell_dome(1.0, -2.0, 3), MeshError);
  EXPECT_THROW(generate_cell_dome(1.0, 1.0, 0), MeshError);
}

TEST(Mesh, GeometryReferenceSimplex) {
  Mesh m = reference_simplex();
  validate(m);
  MeshGeometry g = geometry(m);
  EXPECT_NEAR(g.volume, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(g.surface_area, (3.0 + std::sqrt(3.0)) / 2.0, 1e-14);
  EXPECT_NEAR(g.h, std::sqrt(2.0), 1e-15);
  EXPECT_EQ(m.n_tris(), 4);
  EXPECT_EQ(m.n_surf(), 4);
}

TEST(Mesh, GeometryInvariantUnderReindexing) {
  Mesh m = generate_unit_ball(0);
  const int nv = m.n_vertices();
  std::vector<int> perm(nv);
  for (int i = 0; i < nv; ++i) perm[i] = i;
  std::mt19937 rng(3);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Vec3> verts(nv);
  for (int i = 0; i < nv; ++i) verts[perm[i]] = m.vertices[i];
  std::vector<std::array<int, 4>> tets(m.tets.size());
  for (std::size_t e = 0; e < m.tets.size(); ++e)
    for (int i = 0; i < 4; ++i) tets[e][i] = perm[m.tets[e][i]];
  Mesh m2 = build_mesh(verts, tets);
  validate(m2);
  MeshGeometry g1 = geometry(m), g2 = geometry(m2);
  EXPECT_NEAR(g1.volume, g2.volume, 1e-12 * g1.volume);
  EXPECT_NEAR(g1.surface_area, g2.surface_area, 1e-12 * g1.surface_area);
  EXPECT_DOUBLE_EQ(g1.h, g2.h);
}

TEST(Mesh, TagBottomHugeToleranceTagsEverything) {
  Mesh m = generate_cell_dome(1.0, 1.0, 3);
  int n = tag_bottom(m, 100.0);
  EXPECT_EQ(n, m.n_tris());
}

TEST(Mesh, DegenerateTetRejected) {
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0.5, 0.5, 0}};  // coplanar
  EXPECT_THROW(build_mesh(v, {{0, 1, 2, 3}}), MeshError);
}

TEST(Msh, SingleTetRoundtrip) {
  Mesh ref = reference_simplex();
  const std::string path = testing::TempDir() + "single_tet.msh";
  write_msh(path, ref);
  Mesh m = load_msh(path);
  validate(m);
  EXPECT_EQ(m.n_tets(), 1);
  EXPECT_EQ(m.n_tris(), 4);
  EXPECT_NEAR(geometry(m).volume, 1.0 / 6.0, 1e-15);
}

TEST(Msh, PhysicalSurfaceRegion) {
  Mesh ref = reference_simplex();
  const std::string path = testing::TempDir() + "tagged_tet.msh";
  write_msh(path, ref, {{"nucleus", {0}}});
  Mesh m = load_msh(path);
  validate(m);
  ASSERT_TRUE(m.has_region("nucleus"));
  EXPECT_EQ(m.region("nucleus").size(), 1u);
  // membrane excludes the nucleus triangle
  EXPECT_EQ(m.membrane.size(), 3u);
  double nucleus_area = m.tri_areas[m.region("nucleus")[0]];
  EXPECT_NEAR(geometry(m).surface_area, (3.0 + std::sqrt(3.0)) / 2.0 - nucleus_area, 1e-14);
}

TEST(Msh, FlippedTetIsReoriented) {
  Mesh ref = reference_simplex();
  const std::string path = testing::TempDir() + "flipped_tet.msh";
  write_msh(path, ref, {}, /*flip_first_tet=*/true);
  Mesh m = load_msh(path);
  validate(m);
  EXPECT_GT(m.tet_vols[0], 0.0);
}

TEST(Msh, GeneratedBallRoundtrip) {
  Mesh ball = generate_unit_ball(1);
  const std::string path = testing::TempDir() + "ball1.msh";
  write_msh(path, ball);
  Mesh m = load_msh(path);
  validate(m);
  EXPECT_EQ(m.n_tets(), ball.n_tets());
  EXPECT_NEAR(geometry(m).volume, geometry(ball).volume, 1e-10);
  EXPECT_NEAR(geometry(m).volume, 4.0 * kPi / 3.0, 0.05 * 4.0 * kPi / 3.0);
}

TEST(Msh, UnsupportedElementType) {
  const std::string path = testing::TempDir() + "penta.msh";
  std::ofstream out(path);
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n6\n"
         "1 0 0 0\n2 1 0 0\n3 0 1 0\n4 0 0 1\n5 1 0 1\n6 0 1 1\n$EndNodes\n"
         "$Elements\n1\n1 6 2 1 1 1 2 3 4 5 6\n$EndElements\n";
  out.close();
  try {
    load_msh(path);
    FAIL() << "expected MeshError";
  } catch (const MeshError& e) {
    EXPECT_NE(std::string(e.what()).find("unsupported element type"), std::string::npos);
  }
}

TEST(Msh, MalformedFileReportsLine) {
  const std::string path = testing::TempDir() + "malformed.msh";
  std::ofstream out(path);
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\nnot_a_number\n";
  out.close();
  try {
    load_msh(path);
    FAIL() << "expected MeshError";
  } catch (const MeshError& e) {
    EXPECT_NE(std::string(e.what()).find(":5"), std::string::npos) << e.what();
  }
}

TEST(Msh, MissingFile) { EXPECT_THROW(load_msh("/nonexistent/mesh.msh"), MeshError); }

TEST(Msh, InteriorSurfaceElementRejected) {
  // two tets sharing face (1,2,3); tagging the shared face must fail the cross-check
  const std::string path = testing::TempDir() + "interior_face.msh";
  std::ofstream out(path);
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n5\n"
         "1 0 0 0\n2 1 0 0\n3 0 1 0\n4 0 0 1\n5 1 1 1\n$EndNodes\n"
         "$Elements\n3\n"
         "1 2 2 1 1 2 3 4\n"
         "2 4 2 1 1 1 2 3 4\n"
         "3 4 2 1 1 2 3 4 5\n$EndElements\n";
  out.close();
  try {
    load_msh(path);
    FAIL() << "expected MeshError";
  } catch (const MeshError& e) {
    EXPECT_NE(std::string(e.what()).find("not a boundary face"), std::string::npos);
  }
}
