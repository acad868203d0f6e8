#pragma once

#include <string>
#include <vector>

#include "cellmech/mesh.hpp"
#include "cellmech/model.hpp"
#include "cellmech/simulator.hpp"

namespace cellmech {

struct MeshConfig {
  std::string path;                // MSH input; takes precedence over the generator
  std::string generator = "dome";  // "dome" | "ball"
  double base_radius = kDomeBaseRadius;
  double height = kDomeHeight;
  int refinement = kDomeRefinement;  // dome lattice density
  int level = 2;                     // ball refinement level
  bool tag_bottom_patch = true;      // tag boundary facets on the base plane as Gamma0
};

struct OutputConfig {
  std::string directory = "out";
  int cadence = 0;  // field snapshot every N steps; 0 = initial and final only
};

struct SweepConfig {
  std::vector<double> e_values{0.1, 5.7, 7.0e6};       // substrate stiffness, kPa
  std::vector<double> c1_values{0.0, 0.1, 0.5, 2.0};   // stress feedback
  std::vector<std::string> ec_modes;  // empty: the scenario coupling only
  std::vector<std::string> stimuli;   // empty: the scenario stimulus only
};

struct RunConfig {
  MeshConfig mesh;
  Scenario scenario;
  ModelParams params;
  SimOptions sim;
  OutputConfig output;
  SweepConfig sweep;
};

// Strict INI: [mesh]/[scenario]/[params]/[sweep]/[output] sections, key = value
// lines, full-line # or ; comments. Unknown sections or keys are ConfigErrors
// that name the offender and its line.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Build (or load) and tag the mesh described by the config.
Mesh make_mesh(const MeshConfig& mc);

}  // namespace cellmech
