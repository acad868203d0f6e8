#include "cellmech/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include "cellmech/errors.hpp"
#include "cellmech/output.hpp"
#include "cellmech/threads.hpp"

namespace cellmech {

namespace {

namespace fs = std::filesystem;

// shortest decimal form that round-trips exactly; deterministic across reruns
std::string g(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + dir + " (" + ec.message() + ")");
}

int planned_steps(const SimOptions& o) {
  return static_cast<int>(std::ceil(o.t_end / o.dt - 1e-9));
}

void snapshot(const Simulator& sim, const std::string& dir, int step) {
  char tag[16];
  std::snprintf(tag, sizeof tag, "%06d", step);
  write_vtk_bulk(dir + "/fields_" + tag + ".vtk", sim.mesh(), sim.phi_d(), sim.phi_a(),
                 sim.displacement(), sim.divu_cells(), sim.tensile_stress_cells(),
                 sim.ec_cells());
  write_vtk_surface(dir + "/membrane_" + tag + ".vtk", sim.mesh(), sim.rho_a());
}

struct CellOutcome {
  std::string label;
  bool ok = false;
  std::string status = "ok";
  StepRecord last;
  bool reached_steady = false;
  double steady_time = -1.0;
  double fak_defect = 0.0, fak_defect_predicted = 0.0;
};

// fixed grid order; cells may complete in any order
template <class RunCell>
void run_cells(int ncells, RunCell&& run_one) {
  const int workers = std::max(1, std::min(thread_count(), ncells));
  if (workers == 1) {
    for (int i = 0; i < ncells; ++i) run_one(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < ncells; i = next.fetch_add(1)) run_one(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

void cmd_run(const RunConfig& cfg, std::ostream& log) {
  ensure_dir(cfg.output.directory);
  const Mesh mesh = make_mesh(cfg.mesh);
  Simulator sim(mesh, cfg.params, cfg.scenario, cfg.sim);

  const int nsteps = planned_steps(cfg.sim);
  const int cadence = cfg.output.cadence;
  SimResult res = sim.run([&](const Simulator& s, int step, double) {
    const bool due = cadence > 0 ? (step % cadence == 0 || step == nsteps)
                                 : (step == 0 || step == nsteps);
    if (due) snapshot(s, cfg.output.directory, step);
  });
  write_series_csv(cfg.output.directory + "/series.csv", res.series);

  const StepRecord& last = res.series.back();
  log << "steps " << nsteps << "  t_end " << g(last.t) << "  steady "
      << (last.steady ? "yes" : "no") << "\n"
      << "ec_mean " << g(last.ec_mean) << "  divu_mean " << g(last.divu_mean) << "  phia_mean "
      << g(last.phia_mean) << "  rhoa_mean " << g(last.rhoa_mean) << "  max_u " << g(last.max_u)
      << "\n"
      << "fak defect " << g(res.fak_mass_final - res.fak_mass_initial) << " (budget "
      << g(res.fak_defect_predicted) << ")\n";
}

void cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  if (cfg.sweep.e_values.empty() || cfg.sweep.c1_values.empty())
    throw ConfigError("sweep axes must be non-empty");
  ensure_dir(cfg.output.directory);
  const Mesh mesh = make_mesh(cfg.mesh);

  std::vector<std::string> ec_modes = cfg.sweep.ec_modes;
  if (ec_modes.empty()) ec_modes = {to_string(cfg.scenario.coupling)};
  std::vector<std::string> stimuli = cfg.sweep.stimuli;
  if (stimuli.empty()) stimuli = {to_string(cfg.scenario.stimulus)};

  struct Cell {
    Coupling coupling;
    Stimulus stimulus;
    double e, c1;
  };
  std::vector<Cell> cells;
  for (const std::string& ec : ec_modes)
    for (const std::string& st : stimuli)
      for (double e : cfg.sweep.e_values)
        for (double c1 : cfg.sweep.c1_values)
          cells.push_back({parse_coupling(ec), parse_stimulus(st), e, c1});

  std::vector<CellOutcome> outcomes(cells.size());
  run_cells(static_cast<int>(cells.size()), [&](int i) {
    const Cell& c = cells[i];
    CellOutcome& out = outcomes[i];
    out.label = to_string(c.coupling) + "," + to_string(c.stimulus) + "," + g(c.e) + "," + g(c.c1);
    try {
      RunConfig rc = cfg;
      rc.scenario.coupling = c.coupling;
      rc.scenario.stimulus = c.stimulus;
      rc.params.e_stiff = c.e;
      rc.params.c1 = c.c1;
      Simulator sim(mesh, rc.params, rc.scenario, rc.sim);
      SimResult res = sim.run();
      const std::string dir = cfg.output.directory + "/cell_" + std::to_string(i);
      ensure_dir(dir);
      write_series_csv(dir + "/series.csv", res.series);
      out.ok = true;
      out.last = res.series.back();
      out.reached_steady = res.reached_steady;
      out.steady_time = res.steady_time;
      out.fak_defect = res.fak_mass_final - res.fak_mass_initial;
      out.fak_defect_predicted = res.fak_defect_predicted;
    } catch (const std::exception& e) {
      out.status = sanitize(e.what());
    }
  });

  std::ofstream sum(cfg.output.directory + "/sweep.csv");
  if (!sum) throw ConfigError("cannot open output file: " + cfg.output.directory + "/sweep.csv");
  sum << "coupling,stimulus,e_kpa,c1,status,steady,steady_time,ec_mean,ec_min,ec_max,"
         "divu_mean,divu_min,divu_max,phia_mean,phia_min,phia_max,rhoa_mean,rhoa_min,rhoa_max,"
         "max_u,fak_defect,fak_defect_predicted\n";
  int failures = 0;
  for (const CellOutcome& o : outcomes) {
    const StepRecord& r = o.last;
    auto val = [&](double v) { return o.ok ? g(v) : std::string("nan"); };
    sum << o.label << ',' << o.status << ',' << (o.reached_steady ? 1 : 0) << ','
        << val(o.steady_time) << ',' << val(r.ec_mean) << ',' << val(r.ec_min) << ','
        << val(r.ec_max) << ',' << val(r.divu_mean) << ',' << val(r.divu_min) << ','
        << val(r.divu_max) << ',' << val(r.phia_mean) << ',' << val(r.phia_min) << ','
        << val(r.phia_max) << ',' << val(r.rhoa_mean) << ',' << val(r.rhoa_min) << ','
        << val(r.rhoa_max) << ',' << val(r.max_u) << ',' << val(o.fak_defect) << ','
        << val(o.fak_defect_predicted) << '\n';
    if (!o.ok) ++failures;
  }
  log << "sweep cells " << outcomes.size() << "  failures " << failures << "\n";
}

void cmd_sensitivity(const RunConfig& cfg, std::ostream& log) {
  if (cfg.sweep.e_values.empty()) throw ConfigError("sensitivity needs a non-empty e axis");
  ensure_dir(cfg.output.directory);
  const Mesh mesh = make_mesh(cfg.mesh);

  // the default config is already the reference setting (coupled stiffness,
  // stress feedback on, free cell, 3D stimulus); explicit overrides are honored
  const RunConfig& base = cfg;

  struct Knob {
    const char* name;
    double ModelParams::*field;
  };
  const std::vector<Knob> knobs = {{"c1", &ModelParams::c1}, {"k6", &ModelParams::k6},
                                   {"k7", &ModelParams::k7}, {"k8", &ModelParams::k8},
                                   {"p", &ModelParams::p},   {"nu_c", &ModelParams::nu_c}};
  const std::vector<double> deltas = {-20.0, -10.0, 10.0, 20.0};
  const std::vector<double>& es = cfg.sweep.e_values;

  struct Job {
    int e_idx;
    int knob = -1;   // -1: baseline
    double delta = 0.0;
  };
  std::vector<Job> jobs;
  for (int ei = 0; ei < static_cast<int>(es.size()); ++ei) {
    jobs.push_back({ei, -1, 0.0});
    for (int k = 0; k < static_cast<int>(knobs.size()); ++k)
      for (double d : deltas) jobs.push_back({ei, k, d});
  }

  struct Means {
    bool ok = false;
    std::string status = "ok";
    double ec = 0, divu = 0, phia = 0, rhoa = 0;
  };
  std::vector<Means> results(jobs.size());
  run_cells(static_cast<int>(jobs.size()), [&](int i) {
    const Job& j = jobs[i];
    Means& m = results[i];
    try {
      RunConfig rc = base;
      rc.params.e_stiff = es[j.e_idx];
      if (j.knob >= 0) rc.params.*(knobs[j.knob].field) *= 1.0 + j.delta / 100.0;
      Simulator sim(mesh, rc.params, rc.scenario, rc.sim);
      SimResult res = sim.run();
      const StepRecord& r = res.series.back();
      m.ok = true;
      m.ec = r.ec_mean;
      m.divu = r.divu_mean;
      m.phia = r.phia_mean;
      m.rhoa = r.rhoa_mean;
    } catch (const std::exception& e) {
      m.status = sanitize(e.what());
    }
  });

  // baselines by e index
  std::vector<const Means*> base_means(es.size(), nullptr);
  for (std::size_t i = 0; i < jobs.size(); ++i)
    if (jobs[i].knob < 0) base_means[jobs[i].e_idx] = &results[i];

  auto pct = [](double v, double v0) { return (v - v0) / v0 * 100.0; };

  std::ofstream out(cfg.output.directory + "/sensitivity.csv");
  if (!out)
    throw ConfigError("cannot open output file: " + cfg.output.directory + "/sensitivity.csv");
  out << "param,delta_pct,e_kpa,ec_diff_pct,divu_diff_pct,phia_diff_pct,rhoa_diff_pct,status\n";
  int failures = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Job& j = jobs[i];
    if (j.knob < 0) continue;
    const Means& m = results[i];
    const Means& b = *base_means[j.e_idx];
    std::string status = m.status;
    if (!b.ok) status = "baseline failed: " + b.status;
    const bool ok = m.ok && b.ok;
    if (!ok) ++failures;
    out << knobs[j.knob].name << ',' << g(j.delta) << ',' << g(es[j.e_idx]) << ','
        << (ok ? g(pct(m.ec, b.ec)) : "nan") << ',' << (ok ? g(pct(m.divu, b.divu)) : "nan")
        << ',' << (ok ? g(pct(m.phia, b.phia)) : "nan") << ','
        << (ok ? g(pct(m.rhoa, b.rhoa)) : "nan") << ',' << status << '\n';
  }
  log << "sensitivity jobs " << jobs.size() << "  failures " << failures << "\n";
}

void cmd_benchmark(const BenchmarkOptions& opt, const std::string& outdir, std::ostream& log) {
  ensure_dir(outdir);
  EocReport rep = run_benchmark(opt);
  {
    std::ofstream err_csv(outdir + "/benchmark_errors.csv");
    if (!err_csv) throw ConfigError("cannot open output file: " + outdir + "/benchmark_errors.csv");
    rep.write_errors_csv(err_csv);
    std::ofstream eoc_csv(outdir + "/benchmark_eoc.csv");
    if (!eoc_csv) throw ConfigError("cannot open output file: " + outdir + "/benchmark_eoc.csv");
    rep.write_eoc_csv(eoc_csv);
  }
  rep.print_table(log);
}

void cmd_convert_units(const std::vector<double>& values, bool to_counts, std::ostream& out) {
  out << "counts_per_um2_per_umol_dm2 " << g(kRhoCountsPerArea) << "\n";
  for (double v : values)
    out << g(v) << " -> " << g(to_counts ? rho_to_counts(v) : counts_to_rho(v)) << "\n";
}

void cmd_mesh_info(const RunConfig& cfg, std::ostream& out) {
  const Mesh mesh = make_mesh(cfg.mesh);
  const MeshGeometry geo = geometry(mesh);
  out << "vertices " << mesh.n_vertices() << "\ntets " << mesh.n_tets() << "\nboundary_tris "
      << mesh.n_tris() << "\nmembrane_tris " << mesh.membrane.size() << "\nsurface_vertices "
      << mesh.n_surf() << "\nvolume " << g(geo.volume) << "\nmembrane_area "
      << g(geo.surface_area) << "\nbottom_area " << g(geo.bottom_area) << "\nn_r " << g(geo.n_r)
      << "\nh " << g(geo.h) << "\n";
  for (const auto& [name, tris] : mesh.regions)
    out << "region " << name << " " << tris.size() << "\n";
}

}  // namespace cellmech
