#include "cellmech/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "cellmech/errors.hpp"

namespace cellmech {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& what, int line) {
  throw ConfigError(what + " at line " + std::to_string(line));
}

double parse_double(const std::string& v, int line) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') bad("expected a number, got '" + v + "'", line);
  return d;
}

int parse_int(const std::string& v, int line) {
  char* end = nullptr;
  const long n = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') bad("expected an integer, got '" + v + "'", line);
  return static_cast<int>(n);
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  bad("expected a boolean, got '" + v + "'", line);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& v, int line) {
  std::vector<double> out;
  for (const std::string& s : split_list(v)) out.push_back(parse_double(s, line));
  return out;
}

const std::map<std::string, double ModelParams::*>& param_fields() {
  static const std::map<std::string, double ModelParams::*> m = {
      {"d1", &ModelParams::d1},
      {"d2", &ModelParams::d2},
      {"d3", &ModelParams::d3},
      {"k1", &ModelParams::k1},
      {"k2", &ModelParams::k2},
      {"k3", &ModelParams::k3},
      {"k4", &ModelParams::k4},
      {"k5", &ModelParams::k5},
      {"k6", &ModelParams::k6},
      {"k7", &ModelParams::k7},
      {"k8", &ModelParams::k8},
      {"c_half", &ModelParams::c_half},
      {"e_stiff", &ModelParams::e_stiff},
      {"hill_n", &ModelParams::hill_n},
      {"gamma", &ModelParams::gamma},
      {"c1", &ModelParams::c1},
      {"p", &ModelParams::p},
      {"nu_c", &ModelParams::nu_c},
      {"constant_ec", &ModelParams::constant_ec},
      {"phi_d0", &ModelParams::phi_d0},
      {"phi_a0", &ModelParams::phi_a0},
      {"rho_a0", &ModelParams::rho_a0},
      {"rho_d0", &ModelParams::rho_d0},
      {"omega", &ModelParams::omega},
      {"theta", &ModelParams::theta},
  };
  return m;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') bad("unterminated section header", line);
      section = s.substr(1, s.size() - 2);
      if (section != "mesh" && section != "scenario" && section != "params" &&
          section != "sweep" && section != "output")
        bad("unknown section [" + section + "]", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) bad("expected key = value", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) bad("empty key", line);
    if (section.empty()) bad("key '" + key + "' outside any section", line);

    if (section == "mesh") {
      if (key == "path")
        cfg.mesh.path = val;
      else if (key == "generator")
        cfg.mesh.generator = val;
      else if (key == "base_radius")
        cfg.mesh.base_radius = parse_double(val, line);
      else if (key == "height")
        cfg.mesh.height = parse_double(val, line);
      else if (key == "refinement")
        cfg.mesh.refinement = parse_int(val, line);
      else if (key == "level")
        cfg.mesh.level = parse_int(val, line);
      else if (key == "tag_bottom")
        cfg.mesh.tag_bottom_patch = parse_bool(val, line);
      else
        bad("unknown key '" + key + "' in [mesh]", line);
    } else if (section == "scenario") {
      if (key == "coupling")
        cfg.scenario.coupling = parse_coupling(val);
      else if (key == "attachment")
        cfg.scenario.attachment = parse_attachment(val);
      else if (key == "stimulus")
        cfg.scenario.stimulus = parse_stimulus(val);
      else if (key == "reduced")
        cfg.sim.reduced = parse_bool(val, line);
      else if (key == "dt")
        cfg.sim.dt = parse_double(val, line);
      else if (key == "t_end")
        cfg.sim.t_end = parse_double(val, line);
      else if (key == "chem_tol")
        cfg.sim.chem_tol = parse_double(val, line);
      else if (key == "mech_tol")
        cfg.sim.mech_tol = parse_double(val, line);
      else if (key == "max_iters")
        cfg.sim.max_iters = parse_int(val, line);
      else
        bad("unknown key '" + key + "' in [scenario]", line);
    } else if (section == "params") {
      if (key == "preset") {
        cfg.params = params_preset(val);
      } else {
        const auto& fields = param_fields();
        const auto it = fields.find(key);
        if (it == fields.end()) bad("unknown key '" + key + "' in [params]", line);
        cfg.params.*(it->second) = parse_double(val, line);
      }
    } else if (section == "sweep") {
      if (key == "e")
        cfg.sweep.e_values = parse_double_list(val, line);
      else if (key == "c1")
        cfg.sweep.c1_values = parse_double_list(val, line);
      else if (key == "ec_mode")
        cfg.sweep.ec_modes = split_list(val);
      else if (key == "stimulus")
        cfg.sweep.stimuli = split_list(val);
      else
        bad("unknown key '" + key + "' in [sweep]", line);
    } else {  // output
      if (key == "directory")
        cfg.output.directory = val;
      else if (key == "cadence")
        cfg.output.cadence = parse_int(val, line);
      else
        bad("unknown key '" + key + "' in [output]", line);
    }
  }
  cfg.params.validate();
  if (cfg.output.cadence < 0) throw ConfigError("output cadence must be nonnegative");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

Mesh make_mesh(const MeshConfig& mc) {
  Mesh mesh;
  if (!mc.path.empty()) {
    mesh = load_msh(mc.path);
  } else if (mc.generator == "dome") {
    mesh = generate_cell_dome(mc.base_radius, mc.height, mc.refinement);
  } else if (mc.generator == "ball") {
    mesh = generate_unit_ball(mc.level);
  } else {
    throw ConfigError("unknown mesh generator: " + mc.generator);
  }
  if (mc.tag_bottom_patch) tag_bottom(mesh);
  return mesh;
}

}  // namespace cellmech
