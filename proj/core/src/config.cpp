#include "shearlab/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <type_traits>
#include <sstream>

#include "shearlab/errors.hpp"

namespace shearlab {

namespace pt = boost::property_tree;

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_value(const std::string& key, const std::string& text);

template <>
double parse_value<double>(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (trim(text.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("bad number for " + key + ": '" + text + "'");
}

template <>
int parse_value<int>(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(text, &pos);
    if (trim(text.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("bad integer for " + key + ": '" + text + "'");
}

template <>
std::uint64_t parse_value<std::uint64_t>(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(text, &pos);
    if (trim(text.substr(pos)).empty() && trim(text)[0] != '-') return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("bad unsigned integer for " + key + ": '" + text + "'");
}

template <>
bool parse_value<bool>(const std::string& key, const std::string& text) {
  const auto t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ValidationError("bad boolean for " + key + ": '" + text + "'");
}

template <>
std::string parse_value<std::string>(const std::string&, const std::string& text) {
  return trim(text);
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(parse_value<T>(key, item));
  return out;
}

// Binds every key to a field once so that parsing, overrides and echoing
// share one table.
struct Binding {
  std::string section;
  std::string key;
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

template <typename T>
Binding bind(const char* section, const char* key, T& field) {
  const std::string full = std::string(section) + "." + key;
  return {section, key, [&field, full](const std::string& s) { field = parse_value<T>(full, s); },
          [&field]() {
            if constexpr (std::is_same_v<T, double>) {
              return fmt(field);
            } else if constexpr (std::is_same_v<T, bool>) {
              return std::string(field ? "true" : "false");
            } else if constexpr (std::is_same_v<T, std::string>) {
              return field;
            } else {
              return std::to_string(field);
            }
          }};
}

template <typename T>
Binding bind_list(const char* section, const char* key, std::vector<T>& field) {
  const std::string full = std::string(section) + "." + key;
  return {section, key, [&field, full](const std::string& s) { field = parse_list<T>(full, s); },
          [&field]() {
            std::string out;
            for (std::size_t i = 0; i < field.size(); ++i) {
              if (i) out += ", ";
              if constexpr (std::is_same_v<T, double>) {
                out += fmt(field[i]);
              } else if constexpr (std::is_same_v<T, std::string>) {
                out += field[i];
              } else {
                out += std::to_string(field[i]);
              }
            }
            return out;
          }};
}

std::vector<Binding> bindings(RunConfig& c) {
  return {
      bind("grid", "nz", c.grid.nz),
      bind("grid", "nv", c.grid.nv),
      bind("grid", "lv", c.grid.lv),
      bind("physics", "nu", c.physics.nu),
      bind("physics", "N", c.physics.regularity),
      bind("physics", "nonlinear", c.physics.nonlinear),
      bind("time", "t_final", c.time.t_final),
      bind("time", "dt", c.time.dt),
      bind("time", "dt_max", c.time.dt_max),
      bind("time", "cfl", c.time.cfl),
      bind("time", "scheme", c.time.scheme),
      bind("data", "kind", c.data.kind),
      bind("data", "eps", c.data.eps),
      bind("data", "k", c.data.k),
      bind("data", "j", c.data.j),
      bind("data", "k_max", c.data.k_max),
      bind("data", "eta_max", c.data.eta_max),
      bind("data", "width", c.data.width),
      bind("data", "seed", c.data.seed),
      bind("shear", "profile", c.shear.profile),
      bind("shear", "frame", c.shear.frame),
      bind("shear", "amplitude", c.shear.amplitude),
      bind("shear", "width", c.shear.width),
      bind("shear", "delta", c.shear.delta),
      bind("shear", "s", c.shear.s),
      bind("shear", "delta_max", c.shear.delta_max),
      bind("shear", "table", c.shear.table),
      bind("shear", "refresh", c.shear.refresh),
      bind("elliptic", "tol", c.elliptic.tol),
      bind("elliptic", "max_sweeps", c.elliptic.max_sweeps),
      bind("output", "decimate", c.output.decimate),
      bind("output", "checkpoint_interval", c.output.checkpoint_interval),
      bind("output", "plots", c.output.plots),
      bind("sweep", "nu_min", c.sweep.nu_min),
      bind("sweep", "nu_max", c.sweep.nu_max),
      bind("sweep", "points_per_decade", c.sweep.points_per_decade),
      bind_list("sweep", "nu_list", c.sweep.nu_list),
      bind_list("sweep", "a_list", c.sweep.a_list),
      bind_list("sweep", "gamma_list", c.sweep.gamma_list),
      bind_list("sweep", "eps_list", c.sweep.eps_list),
      bind_list("sweep", "profiles", c.sweep.profiles),
      bind_list("sweep", "seeds", c.sweep.seeds),
      bind("sweep", "t_final_factor", c.sweep.t_final_factor),
      bind("sweep", "bisect_rounds", c.sweep.bisect_rounds),
      bind("sweep", "workers", c.sweep.workers),
  };
}

Binding* find_binding(std::vector<Binding>& bs, const std::string& section, const std::string& key) {
  for (auto& b : bs) {
    if (b.section == section && b.key == key) return &b;
  }
  return nullptr;
}

}  // namespace

double RunConfig::resolved_t_final() const {
  return time.t_final > 0.0 ? time.t_final : 3.0 * std::pow(physics.nu, -1.0 / 3.0);
}

double RunConfig::resolved_s() const {
  return shear.s > 0.0 ? shear.s : physics.regularity + 2.0;
}

bool RunConfig::general_frame() const {
  if (shear.frame == "general") return true;
  if (shear.frame == "couette") return false;
  return shear.profile != "couette";
}

void RunConfig::validate() const {
  if (grid.nz < 8 || grid.nv < 8 || grid.nz % 2 || grid.nv % 2) {
    throw ValidationError("grid dimensions must be even and >= 8");
  }
  if (!(grid.lv > 0.0)) throw ValidationError("grid.lv must be positive");
  if (!(physics.nu >= 0.0 && physics.nu <= 1.0)) throw ValidationError("physics.nu must lie in [0, 1]");
  if (!(physics.regularity > 1.0)) throw ValidationError("physics.N must be > 1");
  if (time.t_final < 0.0) throw ValidationError("time.t_final must be >= 0");
  if (time.t_final == 0.0 && physics.nu == 0.0) {
    throw ValidationError("time.t_final must be given when nu = 0");
  }
  if (time.dt < 0.0 || !(time.dt_max > 0.0)) throw ValidationError("time steps must be positive");
  if (!(time.cfl > 0.0 && time.cfl <= 1.0)) throw ValidationError("time.cfl must lie in (0, 1]");
  if (time.scheme != "rk4" && time.scheme != "heun") throw ValidationError("time.scheme must be rk4 or heun");
  if (data.kind != "single_mode" && data.kind != "random_band" && data.kind != "dipole") {
    throw ValidationError("data.kind must be single_mode, random_band or dipole");
  }
  if (!(data.eps >= 0.0)) throw ValidationError("data.eps must be >= 0");
  if (shear.profile != "couette" && shear.profile != "gauss_bump" && shear.profile != "tanh_defect" &&
      shear.profile != "table") {
    throw ValidationError("unknown shear.profile " + shear.profile);
  }
  if (shear.frame != "auto" && shear.frame != "couette" && shear.frame != "general") {
    throw ValidationError("shear.frame must be auto, couette or general");
  }
  if (shear.profile != "couette" && shear.frame == "couette") {
    throw ValidationError("a non-Couette shear needs the general frame");
  }
  if (shear.profile == "table" && shear.table.empty()) throw ValidationError("shear.table is empty");
  if (shear.refresh < 1) throw ValidationError("shear.refresh must be >= 1");
  if (!(elliptic.tol > 0.0 && elliptic.tol <= 1e-6)) {
    throw ValidationError("elliptic.tol must lie in (0, 1e-6]");
  }
  if (elliptic.max_sweeps < 1) throw ValidationError("elliptic.max_sweeps must be >= 1");
  if (output.decimate < 1) throw ValidationError("output.decimate must be >= 1");
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  RunConfig cfg;
  auto bs = bindings(cfg);
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ValidationError("config: key '" + section + "' outside a section");
    }
    for (const auto& [key, value] : body) {
      auto* b = find_binding(bs, section, key);
      if (!b) throw ValidationError("config: unknown key " + section + "." + key);
      b->set(value.data());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ValidationError("override must look like section.key=value: " + assignment);
  }
  const auto section = trim(assignment.substr(0, dot));
  const auto key = trim(assignment.substr(dot + 1, eq - dot - 1));
  auto bs = bindings(cfg);
  auto* b = find_binding(bs, section, key);
  if (!b) throw ValidationError("unknown key " + section + "." + key);
  b->set(assignment.substr(eq + 1));
}

std::string to_ini(const RunConfig& cfg) {
  RunConfig copy = cfg;
  auto bs = bindings(copy);
  std::string out;
  std::string current;
  for (const auto& b : bs) {
    if (b.section != current) {
      if (!current.empty()) out += "\n";
      out += "[" + b.section + "]\n";
      current = b.section;
    }
    out += b.key + " = " + b.get() + "\n";
  }
  return out;
}

}  // namespace shearlab
