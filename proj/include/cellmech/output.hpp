#pragma once

#include <span>
#include <string>
#include <vector>

#include "cellmech/mesh.hpp"
#include "cellmech/simulator.hpp"

namespace cellmech {

// Legacy ASCII VTK (version 3.0) unstructured grid of the bulk mesh.
// Point data: phi_d, phi_a, |u| and the displacement vector. Cell data:
// div(u), tensile stress trace, cytosolic stiffness.
void write_vtk_bulk(const std::string& path, const Mesh& mesh, std::span<const double> phi_d,
                    std::span<const double> phi_a, std::span<const double> u,
                    std::span<const double> divu_e, std::span<const double> trsig_pos_e,
                    std::span<const double> ec_e);

// Companion triangle grid of the membrane carrying the surface species.
void write_vtk_surface(const std::string& path, const Mesh& mesh, std::span<const double> rho_a);

// Fixed-schema time series; floats printed with %.17g so reruns are
// byte-identical.
void write_series_csv(const std::string& path, const std::vector<StepRecord>& series);

extern const char* const kSeriesCsvHeader;

}  // namespace cellmech
