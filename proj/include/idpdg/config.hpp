#pragma once

// Run configuration: a line-oriented text file with [section] headers and
// `key = value` lines, plus `section.key=value` overrides from the command
// line. Unknown keys and malformed values are rejected with their line.

#include "idpdg/fluxes.hpp"
#include "idpdg/geometry.hpp"
#include "idpdg/idp.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace idpdg {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_string(InterfaceFluxKind kind);
InterfaceFluxKind parse_interface_flux(const std::string& name);
std::string to_string(WaveSpeedEstimate estimate);
WaveSpeedEstimate parse_wave_speed(const std::string& name);

struct CaseConfig {
  // [case]
  std::string name;  // sod, lax, toro4, dmr, freestream, smooth

  // [scheme]
  SchemeKind scheme{SchemeKind::DGSEM};
  int degree{3};
  InterfaceFluxKind interface_flux{InterfaceFluxKind::Suliciu};
  WaveSpeedEstimate wave_speed{WaveSpeedEstimate::Default};

  // [limiter]
  LimiterMode limiter{LimiterMode::IDP};
  double rho_min{1e-12};
  double rho_e_min{1e-12};
  double mean_fraction{1e-4};
  bool smoothness_gate{true};
  double smoothness_scale{6.0};
  double pseudo_tol{1e-12};
  int pseudo_max_iter{50};
  bool verify{false};

  // [mesh]
  int elements{100};  // 1D cases
  double x_min{-0.5};
  double x_max{0.5};
  int nx{166};  // 2D cases
  int ny{50};
  double distortion{0.0};
  int mapping_degree{1};
  std::string mesh_file;  // read instead of generating when set

  // [time]
  double t_final{0.2};
  double cfl{0.9};
  int rk_order{3};
  long max_steps{-1};

  // [output]
  std::string directory{"output"};
  int samples_per_element{10};
  int snapshot_every{0};  // steps between snapshots; 0 writes the final state only
  bool write_stats{true};

  bool operator==(const CaseConfig&) const = default;
};

/// Case-specific defaults (domain, mesh size, end time) on top of the
/// struct defaults.
CaseConfig defaults_for(const std::string& case_name);

/// One `key = value` assignment; `line` is 0 for command-line overrides.
struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
  int line{0};
};

std::vector<ConfigEntry> parse_config_text(const std::string& text);
ConfigEntry parse_override(const std::string& assignment);

/// Applies file entries, then overrides, on top of defaults_for(case). The
/// case name comes from the last assignment of case.name, or `fallback_case`.
CaseConfig load_config(const std::vector<ConfigEntry>& entries, const std::string& fallback_case = {});
CaseConfig load_config_file(const std::string& path, const std::vector<std::string>& overrides,
                            const std::string& fallback_case = {});

/// Full effective configuration in the file format.
std::string echo_config(const CaseConfig& cfg);

void validate(const CaseConfig& cfg);

bool is_riemann_case(const std::string& name);
bool is_two_dimensional(const std::string& name);

}  // namespace idpdg
