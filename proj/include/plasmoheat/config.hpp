#pragma once

#include <string>
#include <vector>

#include "plasmoheat/geometry.hpp"
#include "plasmoheat/heat.hpp"
#include "plasmoheat/plasmonic.hpp"
#include "plasmoheat/types.hpp"

namespace plasmoheat {

struct MaterialConfig {
  enum class Mode { kDirectLambda, kDrude };
  Mode mode = Mode::kDirectLambda;
  Complex lambda_eps{0.1, 1e-3};  // direct mode: contrast parameter
  bool lambda_explicit = false;   // lambda_eps given in the config (otherwise
                                  // commands use the resonant prescription)
  DrudeParams drude;              // drude mode
  double eps_m = 1.0;
  double omega = 0.0;  // rad/s, drude mode only

  Complex epsilon_c() const;   // particle permittivity in either mode
  Complex lambda_value() const;  // contrast parameter in either mode
};

struct RunConfig {
  int schema_version = 1;
  std::vector<ParamCurve> geometry;
  int n = 128;              // boundary nodes per component
  double interior_h = 0.0;  // interior mesh edge target; 0 = diameter / 24
  Vec2 direction{0.7071067811865476, 0.7071067811865476};
  double k_m = 1.0;  // background wavenumber (unit frame)
  MaterialConfig material;
  ThermalParams thermal;
  double kernel_b = 1.0;  // heat kernel parameter (1 = nondimensional)
  double t_end = 10.0;
  int nt = 64;
  double first_frac = 1e-3;
  int mode = -1;     // eigenmode index; -1 = strongest coupled
  double eta = 1e-3; // resonance imaginary shift
  double delta = 0.05;  // physical particle scale for field evaluation
  Vec2 z{0.0, 0.0};     // particle position (field command)
  std::vector<double> gaps{0.2, 0.1, 0.05};  // gap-scan values
  double heat_power = 1.0;  // extra multiplier on the heat source
  unsigned seed = 1234;
  std::string output_dir = "out";
};

// Parse + validate.  Throws ConfigError; `where` carries line:column for
// malformed JSON and a JSON pointer for schema/semantic violations.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin);

// Resolved-config echo with every default filled in; parses back to an
// identical configuration (round-trip stable).
std::string config_echo(const RunConfig& cfg);

}  // namespace plasmoheat
