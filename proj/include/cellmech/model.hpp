#pragma once

#include <string>
#include <vector>

#include "cellmech/mesh.hpp"

namespace cellmech {

// cytosolic stiffness source: derived from active FAK or held fixed
enum class Coupling { Coupled, Constant };

// how rigid body motion is removed from the momentum balance
enum class Attachment { PureTraction, PartiallyFixed, NucleusRobin };

// where the substrate acts: TwoD stimulates stiffness sensing and RhoA
// activation on the bottom patch only, TwoXD widens RhoA activation to the
// whole membrane, ThreeD applies both everywhere
enum class Stimulus { TwoD, TwoXD, ThreeD };

// conversion between umol/dm^2 and molecule counts per um^2
inline constexpr double kRhoCountsPerArea = 5930.0 / 11.0e-5;

inline double rho_to_counts(double rho) { return rho * kRhoCountsPerArea; }
inline double counts_to_rho(double counts) { return counts / kRhoCountsPerArea; }

struct ModelParams {
  double d1 = 4.0;  // inactive FAK diffusivity, um^2/s
  double d2 = 4.0;  // active FAK diffusivity
  double d3 = 0.3;  // active RhoA surface diffusivity

  double k1 = 0.035;   // FAK deactivation rate, 1/s
  double k2 = 0.015;   // baseline integrin activation rate, um/s
  double k3 = 0.379;   // stiffness sensing gain, um/s
  double c_half = 3.25;  // stiffness half saturation, kPa
  double e_stiff = 5.7;  // substrate stiffness, kPa
  double k4 = 0.625;   // RhoA deactivation rate, 1/s
  double k5 = 0.0168;  // RhoA activation rate, 1/s
  double hill_n = 5.0;
  double gamma = 8.8068;

  double c1 = 0.1;  // tensile stress feedback on FAK activation, 1/(kPa s)
  double k6 = 0.1;  // active RhoA pressure on the membrane, kPa dm^2/umol

  double k7 = 0.2;     // baseline cytosolic stiffness, kPa
  double k8 = 2.4245;  // stiffness law scale
  double p = 2.6;      // stiffness law exponent
  double nu_c = 0.3;   // cytosolic Poisson ratio
  double constant_ec = 0.6;  // cytosolic stiffness when uncoupled, kPa

  double phi_d0 = 0.7;    // initial inactive FAK
  double phi_a0 = 0.3;    // initial active FAK
  double rho_a0 = 6.0e-7;  // initial active RhoA, umol/dm^2
  double rho_d0 = 1.0;    // inactive RhoA pool density

  double omega = 1.0;  // nucleus anchoring spring density, kPa/um
  double theta = 0.0;  // stress relaxation time, s; 0 is purely elastic

  // (gamma phi_a)^n + 1
  [[nodiscard]] double hill(double phi_a) const;
  // membrane FAK activation rate k2 + k3 E / (C + E)
  [[nodiscard]] double k3_tilde(double e) const;
  // RhoA deactivation rate k4 + k5 hill(phi_a)
  [[nodiscard]] double k4_tilde(double phi_a) const;
  // RhoA activation rate k5 hill(phi_a) m_rho / |Y|
  [[nodiscard]] double k5_tilde(double phi_a, double m_rho, double volume) const;
  // total RhoA pool rho_d0 |Y| + rho_a0 |Gamma|
  [[nodiscard]] double m_rho(double volume, double area) const;
  // cytosolic stiffness law k7 (1 + (k8 phi_a)^p)
  [[nodiscard]] double e_c(double phi_a) const;
  // isotropic moduli from Young modulus e and nu_c
  void lame(double e, double& lambda, double& mu) const;
  void validate() const;
};

// named parameter sets; throws ConfigError for unknown names
ModelParams params_preset(const std::string& name);

struct Scenario {
  Coupling coupling = Coupling::Coupled;
  Attachment attachment = Attachment::PureTraction;
  Stimulus stimulus = Stimulus::ThreeD;
};

// boundary facets where the substrate stiffness enters the FAK influx
std::vector<int> stiffness_stimulus_tris(const Mesh& mesh, Stimulus s);
// boundary facets where RhoA activation and deactivation kinetics act
std::vector<int> rho_reaction_tris(const Mesh& mesh, Stimulus s);

Coupling parse_coupling(const std::string& s);
Attachment parse_attachment(const std::string& s);
Stimulus parse_stimulus(const std::string& s);
std::string to_string(Coupling c);
std::string to_string(Attachment a);
std::string to_string(Stimulus s);

}  // namespace cellmech
