#include "idpdg/config.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace idpdg {

std::string to_string(InterfaceFluxKind kind) {
  switch (kind) {
    case InterfaceFluxKind::Rusanov: return "rusanov";
    case InterfaceFluxKind::HLL: return "hll";
    case InterfaceFluxKind::Suliciu: return "suliciu";
  }
  return "?";
}

InterfaceFluxKind parse_interface_flux(const std::string& name) {
  if (name == "rusanov") return InterfaceFluxKind::Rusanov;
  if (name == "hll") return InterfaceFluxKind::HLL;
  if (name == "suliciu") return InterfaceFluxKind::Suliciu;
  throw std::invalid_argument("unknown interface flux '" + name + "' (expected rusanov, hll or suliciu)");
}

std::string to_string(WaveSpeedEstimate estimate) {
  return estimate == WaveSpeedEstimate::Guaranteed ? "guaranteed" : "default";
}

WaveSpeedEstimate parse_wave_speed(const std::string& name) {
  if (name == "default") return WaveSpeedEstimate::Default;
  if (name == "guaranteed") return WaveSpeedEstimate::Guaranteed;
  throw std::invalid_argument("unknown wave speed estimate '" + name + "' (expected default or guaranteed)");
}

bool is_riemann_case(const std::string& name) { return name == "sod" || name == "lax" || name == "toro4"; }
bool is_two_dimensional(const std::string& name) { return name == "dmr" || name == "freestream"; }

CaseConfig defaults_for(const std::string& case_name) {
  CaseConfig cfg;
  cfg.name = case_name;
  if (case_name == "dmr") {
    cfg.x_min = -0.5;
    cfg.x_max = 2.5;
    cfg.t_final = 0.2;
    cfg.directory = "output/dmr";
  } else if (case_name == "freestream") {
    cfg.nx = cfg.ny = 8;
    cfg.x_min = 0.0;
    cfg.x_max = 1.0;
    cfg.distortion = 0.1;
    cfg.mapping_degree = 2;
    cfg.t_final = 1.0;
    cfg.max_steps = 50;
    cfg.directory = "output/freestream";
  } else if (case_name == "smooth") {
    cfg.elements = 16;
    cfg.x_min = 0.0;
    cfg.x_max = 1.0;
    cfg.t_final = 1.0;
    cfg.directory = "output/smooth";
  } else if (case_name == "toro4") {
    cfg.t_final = 0.035;
    cfg.directory = "output/toro4";
  } else if (!case_name.empty()) {
    cfg.directory = "output/" + case_name;
  }
  return cfg;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double to_double(const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE) throw std::invalid_argument("expected a number, got '" + v + "'");
  return x;
}

long to_long(const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || errno == ERANGE) throw std::invalid_argument("expected an integer, got '" + v + "'");
  return x;
}

int to_int(const std::string& v) {
  const long x = to_long(v);
  if (x < -2147483647L || x > 2147483647L) throw std::invalid_argument("integer out of range: " + v);
  return static_cast<int>(x);
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw std::invalid_argument("expected true or false, got '" + v + "'");
}

struct Field {
  const char* section;
  const char* key;
  std::function<std::string(const CaseConfig&)> get;
  std::function<void(CaseConfig&, const std::string&)> set;
};

#define IDPDG_FIELD(sec, key, member, fmt, parse) \
  Field { sec, key, [](const CaseConfig& c) { return fmt(c.member); }, [](CaseConfig& c, const std::string& v) { c.member = parse(v); } }

std::string as_is(const std::string& s) { return s; }
std::string bool_text(bool b) { return b ? "true" : "false"; }
template <class T>
std::string int_text(T v) { return std::to_string(v); }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      IDPDG_FIELD("case", "name", name, as_is, as_is),
      IDPDG_FIELD("scheme", "type", scheme, to_string, parse_scheme),
      IDPDG_FIELD("scheme", "degree", degree, int_text, to_int),
      IDPDG_FIELD("scheme", "interface_flux", interface_flux, to_string, parse_interface_flux),
      IDPDG_FIELD("scheme", "wave_speed", wave_speed, to_string, parse_wave_speed),
      IDPDG_FIELD("limiter", "mode", limiter, to_string, parse_limiter_mode),
      IDPDG_FIELD("limiter", "rho_min", rho_min, format_double, to_double),
      IDPDG_FIELD("limiter", "rho_e_min", rho_e_min, format_double, to_double),
      IDPDG_FIELD("limiter", "mean_fraction", mean_fraction, format_double, to_double),
      IDPDG_FIELD("limiter", "smoothness_gate", smoothness_gate, bool_text, to_bool),
      IDPDG_FIELD("limiter", "smoothness_scale", smoothness_scale, format_double, to_double),
      IDPDG_FIELD("limiter", "pseudo_tol", pseudo_tol, format_double, to_double),
      IDPDG_FIELD("limiter", "pseudo_max_iter", pseudo_max_iter, int_text, to_int),
      IDPDG_FIELD("limiter", "verify", verify, bool_text, to_bool),
      IDPDG_FIELD("mesh", "elements", elements, int_text, to_int),
      IDPDG_FIELD("mesh", "x_min", x_min, format_double, to_double),
      IDPDG_FIELD("mesh", "x_max", x_max, format_double, to_double),
      IDPDG_FIELD("mesh", "nx", nx, int_text, to_int),
      IDPDG_FIELD("mesh", "ny", ny, int_text, to_int),
      IDPDG_FIELD("mesh", "distortion", distortion, format_double, to_double),
      IDPDG_FIELD("mesh", "mapping_degree", mapping_degree, int_text, to_int),
      IDPDG_FIELD("mesh", "file", mesh_file, as_is, as_is),
      IDPDG_FIELD("time", "t_final", t_final, format_double, to_double),
      IDPDG_FIELD("time", "cfl", cfl, format_double, to_double),
      IDPDG_FIELD("time", "rk_order", rk_order, int_text, to_int),
      IDPDG_FIELD("time", "max_steps", max_steps, int_text, to_long),
      IDPDG_FIELD("output", "directory", directory, as_is, as_is),
      IDPDG_FIELD("output", "samples_per_element", samples_per_element, int_text, to_int),
      IDPDG_FIELD("output", "snapshot_every", snapshot_every, int_text, to_int),
      IDPDG_FIELD("output", "write_stats", write_stats, bool_text, to_bool),
  };
  return table;
}

#undef IDPDG_FIELD

std::string where(const ConfigEntry& e) {
  return e.line > 0 ? "line " + std::to_string(e.line) : "command line";
}

const Field& lookup(const ConfigEntry& e) {
  const Field* found = nullptr;
  int matches = 0;
  for (const auto& f : fields()) {
    if (e.key != f.key) continue;
    if (!e.section.empty() && e.section != f.section) continue;
    found = &f;
    ++matches;
  }
  const std::string name = e.section.empty() ? e.key : e.section + "." + e.key;
  if (matches == 0) throw ConfigError(where(e) + ": unknown key '" + name + "'");
  if (matches > 1) throw ConfigError(where(e) + ": ambiguous key '" + name + "'");
  return *found;
}

}  // namespace

std::vector<ConfigEntry> parse_config_text(const std::string& text) {
  std::vector<ConfigEntry> out;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("line " + std::to_string(line) + ": malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      bool known = false;
      for (const auto& f : fields()) known |= section == f.section;
      if (!known) throw ConfigError("line " + std::to_string(line) + ": unknown section '" + section + "'");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value', got '" + s + "'");
    if (section.empty())
      throw ConfigError("line " + std::to_string(line) + ": key outside of a [section]");
    ConfigEntry e{section, trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
    if (e.key.empty()) throw ConfigError("line " + std::to_string(line) + ": missing key");
    lookup(e);
    out.push_back(e);
  }
  return out;
}

ConfigEntry parse_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("command line: expected key=value, got '" + assignment + "'");
  const std::string lhs = trim(assignment.substr(0, eq));
  ConfigEntry e;
  const auto dot = lhs.find('.');
  if (dot == std::string::npos) {
    e.key = lhs;
  } else {
    e.section = lhs.substr(0, dot);
    e.key = lhs.substr(dot + 1);
  }
  e.value = trim(assignment.substr(eq + 1));
  lookup(e);
  return e;
}

CaseConfig load_config(const std::vector<ConfigEntry>& entries, const std::string& fallback_case) {
  std::string name = fallback_case;
  for (const auto& e : entries)
    if (e.key == "name" && (e.section.empty() || e.section == "case")) name = e.value;
  if (name.empty()) throw ConfigError("missing required key 'case.name'");
  CaseConfig cfg = defaults_for(name);
  for (const auto& e : entries) {
    const Field& f = lookup(e);
    try {
      f.set(cfg, e.value);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(where(e) + ": " + f.section + "." + f.key + ": " + err.what());
    }
  }
  validate(cfg);
  return cfg;
}

CaseConfig load_config_file(const std::string& path, const std::vector<std::string>& overrides,
                            const std::string& fallback_case) {
  std::vector<ConfigEntry> entries;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      entries = parse_config_text(ss.str());
    } catch (const ConfigError& err) {
      throw ConfigError(path + ": " + err.what());
    }
  }
  for (const auto& o : overrides) entries.push_back(parse_override(o));
  return load_config(entries, fallback_case);
}

std::string echo_config(const CaseConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const auto& f : fields()) {
    if (section != f.section) {
      if (!section.empty()) os << '\n';
      section = f.section;
      os << '[' << section << "]\n";
    }
    os << f.key << " = " << f.get(cfg) << '\n';
  }
  return os.str();
}

void validate(const CaseConfig& c) {
  auto fail = [](const std::string& key, const std::string& why) { throw ConfigError(key + ": " + why); };
  if (!is_riemann_case(c.name) && !is_two_dimensional(c.name) && c.name != "smooth")
    fail("case.name", "unknown case '" + c.name + "' (expected sod, lax, toro4, smooth, dmr or freestream)");
  if (c.degree < 1 || c.degree > 8) fail("scheme.degree", "must lie in [1, 8]");
  if (!(c.rho_min > 0.0)) fail("limiter.rho_min", "must be positive");
  if (!(c.rho_e_min > 0.0)) fail("limiter.rho_e_min", "must be positive");
  if (!(c.mean_fraction >= 0.0 && c.mean_fraction < 1.0)) fail("limiter.mean_fraction", "must lie in [0, 1)");
  if (!(c.smoothness_scale > 0.0)) fail("limiter.smoothness_scale", "must be positive");
  if (!(c.pseudo_tol > 0.0)) fail("limiter.pseudo_tol", "must be positive");
  if (c.pseudo_max_iter < 1) fail("limiter.pseudo_max_iter", "must be at least 1");
  if (c.elements < 1) fail("mesh.elements", "must be at least 1");
  if (!(c.x_max > c.x_min)) fail("mesh.x_max", "must exceed mesh.x_min");
  if (c.nx < 1) fail("mesh.nx", "must be at least 1");
  if (c.ny < 1) fail("mesh.ny", "must be at least 1");
  if (c.mapping_degree < 1 || c.mapping_degree > c.degree)
    fail("mesh.mapping_degree", "must lie in [1, scheme.degree]");
  if (!(c.t_final >= 0.0)) fail("time.t_final", "must be non-negative");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) fail("time.cfl", "must lie in (0, 1]");
  if (c.rk_order < 1 || c.rk_order > 3) fail("time.rk_order", "must be 1, 2 or 3");
  if (c.samples_per_element < 2) fail("output.samples_per_element", "must be at least 2");
  if (c.snapshot_every < 0) fail("output.snapshot_every", "must be non-negative");
}

}  // namespace idpdg
