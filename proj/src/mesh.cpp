#include "cellmech/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "cellmech/errors.hpp"

namespace cellmech {

namespace {

using Triple = std::array<int, 3>;

Triple sorted_triple(int a, int b, int c) {
  Triple t{a, b, c};
  std::sort(t.begin(), t.end());
  return t;
}

struct TripleHash {
  std::size_t operator()(const Triple& t) const {
    std::size_t h = 1469598103934665603ull;
    for (int v : t) {
      h ^= static_cast<std::size_t>(v);
      h *= 1099511628211ull;
    }
    return h;
  }
};

constexpr std::array<std::array<int, 3>, 4> kTetFaces = {{{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}}};

}  // namespace

const std::vector<int>& Mesh::region(const std::string& name) const {
  auto it = regions.find(name);
  if (it == regions.end()) throw MeshError("unknown region tag: " + name);
  return it->second;
}

std::vector<int> Mesh::region_vertices(const std::string& name) const {
  std::set<int> vs;
  for (int t : region(name))
    for (int v : tris[t]) vs.insert(v);
  return {vs.begin(), vs.end()};
}

Mesh build_mesh(std::vector<Vec3> verts, std::vector<std::array<int, 4>> tets,
                const std::map<std::string, std::vector<std::array<int, 3>>>& named_surfaces) {
  // drop vertices no tet references (stray file nodes, filtered lattice points)
  std::vector<int> remap(verts.size(), -1);
  for (const auto& t : tets)
    for (int v : t) {
      if (v < 0 || v >= static_cast<int>(verts.size()))
        throw MeshError("tet vertex index out of range");
      remap[v] = 0;
    }
  int kept = 0;
  for (std::size_t v = 0; v < verts.size(); ++v)
    if (remap[v] == 0) remap[v] = kept++;
  auto surfaces = named_surfaces;
  if (kept != static_cast<int>(verts.size())) {
    std::vector<Vec3> compact(kept);
    for (std::size_t v = 0; v < verts.size(); ++v)
      if (remap[v] >= 0) compact[remap[v]] = verts[v];
    verts = std::move(compact);
    for (auto& t : tets)
      for (int& v : t) v = remap[v];
    for (auto& [name, tris] : surfaces)
      for (auto& tri : tris)
        for (int& v : tri) {
          if (v < 0 || v >= static_cast<int>(remap.size()) || remap[v] < 0)
            throw MeshError("surface element references an unused vertex");
          v = remap[v];
        }
  }

  Mesh m;
  m.vertices = std::move(verts);
  m.tets = std::move(tets);

  const int nv = m.n_vertices();
  m.tet_vols.resize(m.tets.size());
  for (std::size_t e = 0; e < m.tets.size(); ++e) {
    auto& t = m.tets[e];
    double vol = tet_volume(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]], m.vertices[t[3]]);
    if (vol < 0.0) {
      std::swap(t[2], t[3]);
      vol = -vol;
    }
    if (vol == 0.0) throw MeshError("degenerate (zero-volume) tet at index " + std::to_string(e));
    m.tet_vols[e] = vol;
  }

  // boundary faces appear in exactly one tet
  std::unordered_map<Triple, std::pair<int, int>, TripleHash> face_count;  // -> (count, owner)
  face_count.reserve(m.tets.size() * 4);
  for (std::size_t e = 0; e < m.tets.size(); ++e) {
    const auto& t = m.tets[e];
    for (const auto& f : kTetFaces) {
      auto key = sorted_triple(t[f[0]], t[f[1]], t[f[2]]);
      auto [it, fresh] = face_count.try_emplace(key, std::pair<int, int>{0, static_cast<int>(e)});
      it->second.first++;
      if (it->second.first > 2) throw MeshError("face shared by more than two tets");
      (void)fresh;
    }
  }

  std::unordered_map<Triple, int, TripleHash> boundary_ids;
  for (std::size_t e = 0; e < m.tets.size(); ++e) {
    const auto& t = m.tets[e];
    for (const auto& f : kTetFaces) {
      std::array<int, 3> tri = {t[f[0]], t[f[1]], t[f[2]]};
      auto key = sorted_triple(tri[0], tri[1], tri[2]);
      auto it = face_count.find(key);
      if (it->second.first != 1) continue;
      // orient outward: flip if the right-hand normal points toward the tet centroid
      Vec3 a = m.vertices[tri[0]], b = m.vertices[tri[1]], c = m.vertices[tri[2]];
      Vec3 fc = (a + b + c) * (1.0 / 3.0);
      Vec3 tc = (m.vertices[t[0]] + m.vertices[t[1]] + m.vertices[t[2]] + m.vertices[t[3]]) * 0.25;
      Vec3 nrm = cross(b - a, c - a);
      if (dot(nrm, fc - tc) < 0.0) {
        std::swap(tri[1], tri[2]);
        std::swap(b, c);
      }
      boundary_ids[key] = static_cast<int>(m.tris.size());
      m.tris.push_back(tri);
      m.tri_owner.push_back(static_cast<int>(e));
      m.tri_normals.push_back(tri_normal(a, b, c));
      m.tri_areas.push_back(tri_area(a, b, c));
    }
  }

  for (const auto& [name, file_tris] : surfaces) {
    std::vector<int> ids;
    ids.reserve(file_tris.size());
    for (const auto& ft : file_tris) {
      auto it = boundary_ids.find(sorted_triple(ft[0], ft[1], ft[2]));
      if (it == boundary_ids.end())
        throw MeshError("surface element in region '" + name + "' is not a boundary face");
      ids.push_back(it->second);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    m.regions[name] = std::move(ids);
  }

  // membrane = boundary minus nucleus; chemistry surface numbering
  std::vector<char> is_nucleus(m.tris.size(), 0);
  if (m.has_region("nucleus"))
    for (int t : m.regions.at("nucleus")) is_nucleus[t] = 1;
  for (int t = 0; t < m.n_tris(); ++t)
    if (!is_nucleus[t]) m.membrane.push_back(t);

  m.surf_of_bulk.assign(nv, -1);
  for (int t : m.membrane)
    for (int v : m.tris[t])
      if (m.surf_of_bulk[v] < 0) {
        m.surf_of_bulk[v] = static_cast<int>(m.bulk_of_surf.size());
        m.bulk_of_surf.push_back(v);
      }
  return m;
}

namespace {

// O-grid structured ball: cube core [-c,c]^3 (2m cells per side) plus six shell
// blocks blending the core surface onto the unit sphere; hexahedra are split
// into 12 tets around their centroid with face diagonals through the smallest
// global vertex id (conforming across shared faces).
Mesh build_ogrid(int m, bool hemisphere, double scale_xy, double scale_z) {
  const int n = 2 * m;
  const int layers = m;
  const double c = 0.45;

  std::vector<Vec3> verts;
  auto core_id = [n](int i, int j, int k) { return (k * (n + 1) + j) * (n + 1) + i; };
  // core lattice
  std::vector<int> core(static_cast<std::size_t>(n + 1) * (n + 1) * (n + 1));
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        core[core_id(i, j, k)] = static_cast<int>(verts.size());
        verts.push_back({c * (i - m) / m, c * (j - m) / m, c * (k - m) / m});
      }
  // shell vertices keyed by (surface lattice point, layer)
  std::unordered_map<std::int64_t, int> shell;
  auto shell_key = [&](int lat, int layer) {
    return static_cast<std::int64_t>(lat) * 64 + layer;
  };
  auto on_surface = [n](int i, int j, int k) {
    return i == 0 || i == n || j == 0 || j == n || k == 0 || k == n;
  };
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        if (!on_surface(i, j, k)) continue;
        Vec3 d{static_cast<double>(i - m) / m, static_cast<double>(j - m) / m,
               static_cast<double>(k - m) / m};
        Vec3 pin = d * c;
        Vec3 pout = d * (1.0 / norm(d));
        for (int L = 1; L <= layers; ++L) {
          double t = static_cast<double>(L) / layers;
          shell[shell_key(core_id(i, j, k), L)] = static_cast<int>(verts.size());
          verts.push_back(pin * (1.0 - t) + pout * t);
        }
      }

  // hex cells as 8 vertex ids in bit order (x fastest, then y, then z/layer)
  std::vector<std::array<int, 8>> hexes;
  for (int k = 0; k < n; ++k) {
    if (hemisphere && k < m) continue;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        std::array<int, 8> hx;
        int s = 0;
        for (int dk = 0; dk <= 1; ++dk)
          for (int dj = 0; dj <= 1; ++dj)
            for (int di = 0; di <= 1; ++di) hx[s++] = core[core_id(i + di, j + dj, k + dk)];
        hexes.push_back(hx);
      }
  }
  // shell hexes over each boundary facet of the cube lattice
  auto shell_vertex = [&](int lat, int layer) {
    return layer == 0 ? core[lat] : shell.at(shell_key(lat, layer));
  };
  for (int axis = 0; axis < 3; ++axis)
    for (int side = 0; side <= 1; ++side)
      for (int b2 = 0; b2 < n; ++b2)
        for (int b1 = 0; b1 < n; ++b1) {
          std::array<int, 4> lat;  // facet corners in bit order
          int minz = n;
          int s = 0;
          for (int d2 = 0; d2 <= 1; ++d2)
            for (int d1 = 0; d1 <= 1; ++d1) {
              int idx[3];
              idx[axis] = side == 0 ? 0 : n;
              idx[(axis + 1) % 3] = b1 + d1;
              idx[(axis + 2) % 3] = b2 + d2;
              lat[s++] = core_id(idx[0], idx[1], idx[2]);
              minz = std::min(minz, idx[2]);
            }
          if (hemisphere && minz < m) continue;
          for (int L = 0; L < layers; ++L) {
            std::array<int, 8> hx;
            for (int q = 0; q < 4; ++q) hx[q] = shell_vertex(lat[q], L);
            for (int q = 0; q < 4; ++q) hx[4 + q] = shell_vertex(lat[q], L + 1);
            hexes.push_back(hx);
          }
        }

  for (auto& v : verts) {
    v.x *= scale_xy;
    v.y *= scale_xy;
    v.z *= scale_z;
  }

  // split each hex into 12 tets around its centroid
  constexpr std::array<std::array<int, 4>, 6> kHexFaces = {
      {{0, 1, 3, 2}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 3, 7, 6}, {0, 2, 6, 4}, {1, 3, 7, 5}}};
  std::vector<std::array<int, 4>> tets;
  tets.reserve(hexes.size() * 12);
  for (const auto& hx : hexes) {
    Vec3 cen{0, 0, 0};
    for (int v : hx) cen += verts[v];
    int ci = static_cast<int>(verts.size());
    verts.push_back(cen * 0.125);
    for (const auto& f : kHexFaces) {
      std::array<int, 4> q = {hx[f[0]], hx[f[1]], hx[f[2]], hx[f[3]]};
      int mpos = static_cast<int>(std::min_element(q.begin(), q.end()) - q.begin());
      auto at = [&q](int i) { return q[i & 3]; };
      tets.push_back({at(mpos), at(mpos + 1), at(mpos + 2), ci});
      tets.push_back({at(mpos), at(mpos + 2), at(mpos + 3), ci});
    }
  }
  return build_mesh(std::move(verts), std::move(tets));
}

int ball_core_cells(int level) {
  static constexpr int kLevels[4] = {2, 3, 5, 10};
  if (level <= 3) return kLevels[level];
  return 10 << (level - 3);
}

}  // namespace

Mesh generate_unit_ball(int refinement_level) {
  if (refinement_level < 0) throw MeshError("refinement level must be >= 0");
  return build_ogrid(ball_core_cells(refinement_level), false, 1.0, 1.0);
}

Mesh generate_cell_dome(double base_radius, double height, int refinement) {
  if (!(base_radius > 0.0) || !(height > 0.0))
    throw MeshError("dome radius and height must be positive");
  if (refinement < 1) throw MeshError("dome refinement must be >= 1");
  Mesh mesh = build_ogrid(refinement, true, base_radius, height);
  tag_bottom(mesh);
  return mesh;
}

namespace {

struct MshParser {
  std::ifstream in;
  int lineno = 0;
  std::string path;

  explicit MshParser(const std::string& p) : in(p), path(p) {
    if (!in) throw MeshError("cannot open mesh file: " + p);
  }

  std::string next_line() {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return line;
    }
    throw MeshError(path + ": unexpected end of file at line " + std::to_string(lineno));
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw MeshError(path + ":" + std::to_string(lineno) + ": " + what);
  }
};

}  // namespace

Mesh load_msh(const std::string& path) {
  MshParser p(path);
  if (p.next_line() != "$MeshFormat") p.fail("expected $MeshFormat");
  {
    std::istringstream ss(p.next_line());
    double version = 0.0;
    int file_type = -1, data_size = 0;
    ss >> version >> file_type >> data_size;
    if (!ss || std::abs(version - 2.2) > 1e-9 || file_type != 0)
      p.fail("unsupported MSH format (need ASCII v2.2)");
  }
  if (p.next_line() != "$EndMeshFormat") p.fail("expected $EndMeshFormat");

  std::map<std::pair<int, int>, std::string> physical;  // (dim, tag) -> name
  std::string section = p.next_line();
  if (section == "$PhysicalNames") {
    int count = 0;
    {
      std::istringstream ss(p.next_line());
      ss >> count;
      if (!ss || count < 0) p.fail("bad $PhysicalNames count");
    }
    for (int i = 0; i < count; ++i) {
      std::istringstream ss(p.next_line());
      int dim = 0, tag = 0;
      std::string name;
      ss >> dim >> tag;
      std::getline(ss, name);
      if (!ss) p.fail("bad physical name entry");
      auto l = name.find('"'), r = name.rfind('"');
      if (l != std::string::npos && r != std::string::npos && r > l)
        name = name.substr(l + 1, r - l - 1);
      physical[{dim, tag}] = name;
    }
    if (p.next_line() != "$EndPhysicalNames") p.fail("expected $EndPhysicalNames");
    section = p.next_line();
  }

  if (section != "$Nodes") p.fail("expected $Nodes");
  std::unordered_map<long, int> node_index;
  std::vector<Vec3> verts;
  {
    int count = 0;
    std::istringstream ss(p.next_line());
    ss >> count;
    if (!ss || count < 0) p.fail("bad node count");
    verts.reserve(count);
    for (int i = 0; i < count; ++i) {
      std::istringstream ls(p.next_line());
      long id = 0;
      double x, y, z;
      ls >> id >> x >> y >> z;
      if (!ls) p.fail("bad node line");
      node_index[id] = static_cast<int>(verts.size());
      verts.push_back({x, y, z});
    }
  }
  if (p.next_line() != "$EndNodes") p.fail("expected $EndNodes");

  if (p.next_line() != "$Elements") p.fail("expected $Elements");
  std::vector<std::array<int, 4>> tets;
  std::map<std::string, std::vector<std::array<int, 3>>> named_surfaces;
  {
    int count = 0;
    std::istringstream ss(p.next_line());
    ss >> count;
    if (!ss || count < 0) p.fail("bad element count");
    for (int i = 0; i < count; ++i) {
      std::istringstream ls(p.next_line());
      long id = 0;
      int type = 0, ntags = 0;
      ls >> id >> type >> ntags;
      if (!ls) p.fail("bad element line");
      std::vector<int> tags(ntags);
      for (int t = 0; t < ntags; ++t) ls >> tags[t];
      auto node = [&]() {
        long nid = 0;
        ls >> nid;
        if (!ls) p.fail("bad element node list");
        auto it = node_index.find(nid);
        if (it == node_index.end()) p.fail("element references unknown node");
        return it->second;
      };
      switch (type) {
        case 1:   // line
        case 15:  // point
          break;
        case 2: {  // triangle: candidate surface element, cross-checked later
          int a = node(), b = node(), c = node();
          std::string name = "surface";
          if (ntags > 0) {
            auto it = physical.find({2, tags[0]});
            name = it != physical.end() ? it->second : "surface" + std::to_string(tags[0]);
          }
          named_surfaces[name].push_back({a, b, c});
          break;
        }
        case 4: {  // tetrahedron
          int a = node(), b = node(), c = node(), d = node();
          tets.push_back({a, b, c, d});
          break;
        }
        default:
          p.fail("unsupported element type " + std::to_string(type));
      }
    }
  }
  if (p.next_line() != "$EndElements") p.fail("expected $EndElements");
  if (tets.empty()) throw MeshError(path + ": no tetrahedra found");
  return build_mesh(std::move(verts), std::move(tets), named_surfaces);
}

int tag_bottom(Mesh& mesh, double tol) {
  std::vector<int> ids;
  for (int t = 0; t < mesh.n_tris(); ++t) {
    const auto& tri = mesh.tris[t];
    bool flat = true;
    for (int v : tri) flat = flat && std::abs(mesh.vertices[v].z) <= tol;
    if (flat) ids.push_back(t);
  }
  int count = static_cast<int>(ids.size());
  mesh.regions["Gamma0"] = std::move(ids);
  return count;
}

int tag_bottom(Mesh& mesh) {
  double h = geometry(mesh).h;
  return tag_bottom(mesh, 1e-6 * h);
}

MeshGeometry geometry(const Mesh& mesh) {
  MeshGeometry g;
  for (double v : mesh.tet_vols) g.volume += v;
  for (int t : mesh.membrane) g.surface_area += mesh.tri_areas[t];
  if (mesh.has_region("Gamma0"))
    for (int t : mesh.regions.at("Gamma0")) g.bottom_area += mesh.tri_areas[t];
  g.n_r = g.surface_area > 0.0 ? g.volume / g.surface_area : 0.0;
  for (const auto& t : mesh.tets) {
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        double d = norm(mesh.vertices[t[i]] - mesh.vertices[t[j]]);
        g.h = std::max(g.h, d);
      }
  }
  return g;
}

void validate(const Mesh& mesh) {
  const int nv = mesh.n_vertices();
  std::vector<char> referenced(nv, 0);
  for (std::size_t e = 0; e < mesh.tets.size(); ++e) {
    const auto& t = mesh.tets[e];
    for (int v : t) referenced[v] = 1;
    double vol = tet_volume(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]],
                            mesh.vertices[t[3]]);
    if (!(vol > 0.0)) throw MeshError("non-positive tet volume at " + std::to_string(e));
  }
  for (int v = 0; v < nv; ++v)
    if (!referenced[v]) throw MeshError("vertex " + std::to_string(v) + " belongs to no tet");

  // face incidence: boundary faces once, interior twice
  std::unordered_map<Triple, int, TripleHash> counts;
  for (const auto& t : mesh.tets)
    for (const auto& f : kTetFaces) counts[sorted_triple(t[f[0]], t[f[1]], t[f[2]])]++;
  std::unordered_map<Triple, int, TripleHash> boundary;
  for (const auto& [key, cnt] : counts) {
    if (cnt > 2) throw MeshError("face shared by more than two tets");
    if (cnt == 1) boundary[key] = 1;
  }
  if (boundary.size() != mesh.tris.size()) throw MeshError("boundary triangulation incomplete");
  for (const auto& tri : mesh.tris)
    if (!boundary.count(sorted_triple(tri[0], tri[1], tri[2])))
      throw MeshError("stored boundary tri is not a boundary face");

  // watertight: each boundary edge belongs to exactly two boundary tris
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& tri : mesh.tris)
    for (int i = 0; i < 3; ++i) {
      int a = tri[i], b = tri[(i + 1) % 3];
      edge_count[{std::min(a, b), std::max(a, b)}]++;
    }
  for (const auto& [e, cnt] : edge_count)
    if (cnt != 2) throw MeshError("boundary is not watertight at an edge");

  // outward normals
  for (int t = 0; t < mesh.n_tris(); ++t) {
    const auto& tri = mesh.tris[t];
    const auto& tet = mesh.tets[mesh.tri_owner[t]];
    Vec3 fc = (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]) * (1.0 / 3.0);
    Vec3 tc = (mesh.vertices[tet[0]] + mesh.vertices[tet[1]] + mesh.vertices[tet[2]] +
               mesh.vertices[tet[3]]) *
              0.25;
    if (dot(mesh.tri_normals[t], fc - tc) <= 0.0) throw MeshError("inward boundary normal");
  }

  // closed surface: sum of area-weighted normals vanishes
  Vec3 s{0, 0, 0};
  double total_area = 0.0;
  for (int t = 0; t < mesh.n_tris(); ++t) {
    s += mesh.tri_normals[t] * mesh.tri_areas[t];
    total_area += mesh.tri_areas[t];
  }
  if (norm(s) > 1e-10 * total_area) throw MeshError("boundary normals do not close up");

  // surface map total and injective over membrane vertices
  std::vector<char> on_membrane(nv, 0);
  for (int t : mesh.membrane)
    for (int v : mesh.tris[t]) on_membrane[v] = 1;
  std::vector<char> seen(mesh.bulk_of_surf.size(), 0);
  for (int v = 0; v < nv; ++v) {
    int s_id = mesh.surf_of_bulk[v];
    if (on_membrane[v]) {
      if (s_id < 0 || s_id >= mesh.n_surf() || mesh.bulk_of_surf[s_id] != v || seen[s_id])
        throw MeshError("surface map is not a bijection");
      seen[s_id] = 1;
    } else if (s_id != -1) {
      throw MeshError("surface map assigned to off-membrane vertex");
    }
  }
  for (char c : seen)
    if (!c) throw MeshError("surface map misses a surface vertex");

  for (const auto& [name, ids] : mesh.regions)
    for (int t : ids)
      if (t < 0 || t >= mesh.n_tris()) throw MeshError("region '" + name + "' has bad tri index");
}

}  // namespace cellmech
