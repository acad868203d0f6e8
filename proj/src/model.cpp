#include "cellmech/model.hpp"

#include <cmath>

#include "cellmech/errors.hpp"

namespace cellmech {

double ModelParams::hill(double phi_a) const { return std::pow(gamma * phi_a, hill_n) + 1.0; }

double ModelParams::k3_tilde(double e) const { return k2 + k3 * e / (c_half + e); }

double ModelParams::k4_tilde(double phi_a) const { return k4 + k5 * hill(phi_a); }

double ModelParams::k5_tilde(double phi_a, double m_rho, double volume) const {
  return k5 * hill(phi_a) * m_rho / volume;
}

double ModelParams::m_rho(double volume, double area) const {
  return rho_d0 * volume + rho_a0 * area;
}

double ModelParams::e_c(double phi_a) const { return k7 * (1.0 + std::pow(k8 * phi_a, p)); }

void ModelParams::lame(double e, double& lambda, double& mu) const {
  if (std::abs(nu_c - 0.5) <= 1e-6)
    throw ConfigError("Poisson ratio too close to the incompressible limit");
  lambda = e * nu_c / ((1.0 + nu_c) * (1.0 - 2.0 * nu_c));
  mu = e / (2.0 * (1.0 + nu_c));
}

void ModelParams::validate() const {
  if (d1 <= 0.0 || d2 <= 0.0 || d3 <= 0.0) throw ConfigError("diffusivities must be positive");
  if (k1 < 0.0 || k2 < 0.0 || k3 < 0.0 || k4 < 0.0 || k5 < 0.0)
    throw ConfigError("rate constants must be nonnegative");
  if (c_half <= 0.0) throw ConfigError("stiffness half saturation must be positive");
  if (e_stiff < 0.0) throw ConfigError("substrate stiffness must be nonnegative");
  if (k7 <= 0.0 || constant_ec <= 0.0) throw ConfigError("cytosolic stiffness must be positive");
  if (nu_c <= -1.0 || nu_c >= 0.5 || std::abs(nu_c - 0.5) <= 1e-6)
    throw ConfigError("Poisson ratio must lie in (-1, 0.5)");
  if (phi_d0 < 0.0 || phi_a0 < 0.0 || rho_a0 < 0.0 || rho_d0 < 0.0)
    throw ConfigError("initial data must be nonnegative");
  if (omega < 0.0) throw ConfigError("anchoring spring density must be nonnegative");
  if (theta < 0.0) throw ConfigError("relaxation time must be nonnegative");
}

ModelParams params_preset(const std::string& name) {
  ModelParams p;
  if (name == "table1-default") return p;
  if (name == "appendix-d10") {
    p.d1 = p.d2 = 10.0;
    return p;
  }
  throw ConfigError("unknown parameter preset: " + name);
}

std::vector<int> stiffness_stimulus_tris(const Mesh& mesh, Stimulus s) {
  if (s == Stimulus::ThreeD) return mesh.membrane;
  if (!mesh.has_region("Gamma0") || mesh.region("Gamma0").empty())
    throw ConfigError("stimulus requires a tagged bottom patch Gamma0");
  return mesh.region("Gamma0");
}

std::vector<int> rho_reaction_tris(const Mesh& mesh, Stimulus s) {
  if (s != Stimulus::TwoD) return mesh.membrane;
  if (!mesh.has_region("Gamma0") || mesh.region("Gamma0").empty())
    throw ConfigError("stimulus requires a tagged bottom patch Gamma0");
  return mesh.region("Gamma0");
}

Coupling parse_coupling(const std::string& s) {
  if (s == "coupled") return Coupling::Coupled;
  if (s == "constant") return Coupling::Constant;
  throw ConfigError("unknown coupling: " + s);
}

Attachment parse_attachment(const std::string& s) {
  if (s == "pure-traction") return Attachment::PureTraction;
  if (s == "partially-fixed") return Attachment::PartiallyFixed;
  if (s == "nucleus-robin") return Attachment::NucleusRobin;
  throw ConfigError("unknown attachment: " + s);
}

Stimulus parse_stimulus(const std::string& s) {
  if (s == "2D") return Stimulus::TwoD;
  if (s == "2xD") return Stimulus::TwoXD;
  if (s == "3D") return Stimulus::ThreeD;
  throw ConfigError("unknown stimulus: " + s);
}

std::string to_string(Coupling c) { return c == Coupling::Coupled ? "coupled" : "constant"; }

std::string to_string(Attachment a) {
  switch (a) {
    case Attachment::PureTraction: return "pure-traction";
    case Attachment::PartiallyFixed: return "partially-fixed";
    default: return "nucleus-robin";
  }
}

std::string to_string(Stimulus s) {
  switch (s) {
    case Stimulus::TwoD: return "2D";
    case Stimulus::TwoXD: return "2xD";
    default: return "3D";
  }
}

}  // namespace cellmech
