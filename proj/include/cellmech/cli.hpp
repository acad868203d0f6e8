#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cellmech/config.hpp"
#include "cellmech/verification.hpp"

namespace cellmech {

// Single simulation: field snapshots per cadence plus the time-series CSV.
void cmd_run(const RunConfig& cfg, std::ostream& log);

// Grid sweep over substrate stiffness, stress feedback, and optional coupling
// and stimulus axes. Cells run in parallel; per-cell failures are recorded in
// the summary and do not abort the sweep.
void cmd_sweep(const RunConfig& cfg, std::ostream& log);

// Percentage change of the four observable means under +-10% / +-20%
// perturbations of {c1, k6, k7, k8, p, nu_c}, per substrate stiffness,
// against the coupled pure-traction 3D baseline.
void cmd_sensitivity(const RunConfig& cfg, std::ostream& log);

// Convergence benchmark; writes error and EOC tables.
void cmd_benchmark(const BenchmarkOptions& opt, const std::string& outdir, std::ostream& log);

// Surface-density unit conversion (umol/dm^2 <-> molecules/um^2).
void cmd_convert_units(const std::vector<double>& values, bool to_counts, std::ostream& out);

// Mesh statistics for a config's mesh source.
void cmd_mesh_info(const RunConfig& cfg, std::ostream& out);

}  // namespace cellmech
