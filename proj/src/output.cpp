#include "cellmech/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "cellmech/errors.hpp"

namespace cellmech {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path);
  return out;
}

void put(std::ofstream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

void scalar_field(std::ofstream& out, const char* name, std::span<const double> v) {
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double x : v) {
    put(out, x);
    out << '\n';
  }
}

}  // namespace

const char* const kSeriesCsvHeader =
    "t,ec_mean,ec_min,ec_max,divu_mean,divu_min,divu_max,phia_mean,phia_min,phia_max,"
    "rhoa_mean,rhoa_min,rhoa_max,fak_mass,max_u,steady";

void write_vtk_bulk(const std::string& path, const Mesh& mesh, std::span<const double> phi_d,
                    std::span<const double> phi_a, std::span<const double> u,
                    std::span<const double> divu_e, std::span<const double> trsig_pos_e,
                    std::span<const double> ec_e) {
  std::ofstream out = open_out(path);
  const int nv = mesh.n_vertices(), nt = mesh.n_tets();
  out << "# vtk DataFile Version 3.0\nbulk fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (const Vec3& p : mesh.vertices) {
    put(out, p.x);
    out << ' ';
    put(out, p.y);
    out << ' ';
    put(out, p.z);
    out << '\n';
  }
  out << "CELLS " << nt << ' ' << 5 * nt << '\n';
  for (const auto& t : mesh.tets)
    out << "4 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  out << "CELL_TYPES " << nt << '\n';
  for (int e = 0; e < nt; ++e) out << "10\n";

  out << "POINT_DATA " << nv << '\n';
  scalar_field(out, "phi_d", phi_d);
  scalar_field(out, "phi_a", phi_a);
  {
    std::vector<double> mag(nv);
    for (int v = 0; v < nv; ++v)
      mag[v] = std::sqrt(u[3 * v] * u[3 * v] + u[3 * v + 1] * u[3 * v + 1] +
                         u[3 * v + 2] * u[3 * v + 2]);
    scalar_field(out, "u_mag", mag);
  }
  out << "VECTORS u double\n";
  for (int v = 0; v < nv; ++v) {
    put(out, u[3 * v]);
    out << ' ';
    put(out, u[3 * v + 1]);
    out << ' ';
    put(out, u[3 * v + 2]);
    out << '\n';
  }

  out << "CELL_DATA " << nt << '\n';
  scalar_field(out, "div_u", divu_e);
  scalar_field(out, "tr_sigma_pos", trsig_pos_e);
  scalar_field(out, "e_c", ec_e);
}

void write_vtk_surface(const std::string& path, const Mesh& mesh, std::span<const double> rho_a) {
  std::ofstream out = open_out(path);
  const int ns = mesh.n_surf();
  const int nt = static_cast<int>(mesh.membrane.size());
  out << "# vtk DataFile Version 3.0\nmembrane fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << ns << " double\n";
  for (int s = 0; s < ns; ++s) {
    const Vec3& p = mesh.vertices[mesh.bulk_of_surf[s]];
    put(out, p.x);
    out << ' ';
    put(out, p.y);
    out << ' ';
    put(out, p.z);
    out << '\n';
  }
  out << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (int t : mesh.membrane) {
    out << '3';
    for (int a = 0; a < 3; ++a) out << ' ' << mesh.surf_of_bulk[mesh.tris[t][a]];
    out << '\n';
  }
  out << "CELL_TYPES " << nt << '\n';
  for (int t = 0; t < nt; ++t) out << "5\n";
  out << "POINT_DATA " << ns << '\n';
  scalar_field(out, "rho_a", rho_a);
}

void write_series_csv(const std::string& path, const std::vector<StepRecord>& series) {
  std::ofstream out = open_out(path);
  out << kSeriesCsvHeader << '\n';
  for (const StepRecord& r : series) {
    char buf[640];
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                  "%.17g,%.17g,%d\n",
                  r.t, r.ec_mean, r.ec_min, r.ec_max, r.divu_mean, r.divu_min, r.divu_max,
                  r.phia_mean, r.phia_min, r.phia_max, r.rhoa_mean, r.rhoa_min, r.rhoa_max,
                  r.fak_mass, r.max_u, r.steady ? 1 : 0);
    out << buf;
  }
}

}  // namespace cellmech
