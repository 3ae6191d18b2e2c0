#include "mctx/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include <fmt/format.h>

namespace mctx {

namespace {

struct FieldRef {
  const char* name;
  double SystemConfig::*member;
};

constexpr FieldRef kFields[] = {
    {"D", &SystemConfig::D},
    {"r_in", &SystemConfig::r_in},
    {"r_out", &SystemConfig::r_out},
    {"r_RX", &SystemConfig::r_RX},
    {"d", &SystemConfig::d},
    {"N_out_A", &SystemConfig::N_out_A},
    {"rho_max", &SystemConfig::rho_max},
    {"T", &SystemConfig::T},
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void validate(const SystemConfig& cfg) {
  for (const auto& f : kFields) {
    require(std::isfinite(cfg.*f.member), fmt::format("{} must be finite", f.name));
  }
  require(cfg.D > 0, "D must be > 0");
  require(cfg.r_in > 0, "r_in must be > 0");
  require(cfg.r_out > 0, "r_out must be > 0");
  require(cfg.r_RX > 0, "r_RX must be > 0");
  require(cfg.d > 0, "d must be > 0");
  require(cfg.r_out >= 100.0 * cfg.r_in,
          fmt::format("r_out ({:g}) must be at least 100 * r_in ({:g})", cfg.r_out, cfg.r_in));
  require(cfg.d > cfg.r_RX, "d must exceed r_RX");
  require(cfg.T > 0, "T must be > 0");
  require(cfg.rho_max >= 0, "rho_max must be >= 0");
  require(cfg.N_out_A >= 0, "N_out_A must be >= 0");
  require(cfg.N_a > 0, "N_a must be > 0");
}

DerivedConstants derive_constants(const SystemConfig& cfg) {
  validate(cfg);
  DerivedConstants dc;
  dc.V_in = sphere_volume(cfg.r_in);
  dc.V_out = sphere_volume(cfg.r_out);
  dc.A = 4.0 * kPi * cfg.r_in * cfg.r_in;
  dc.C_out0_A = cfg.N_out_A / (dc.V_out * cfg.N_a);
  dc.N_max = dc.C_out0_A * dc.V_in * cfg.N_a;
  dc.rho_hat_max = cfg.rho_max * dc.V_in / dc.A;
  return dc;
}

KeyValues parse_key_values(std::istream& in) {
  KeyValues out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value'", lineno));
    }
    const auto key = trim(view.substr(0, eq));
    const auto value = trim(view.substr(eq + 1));
    if (key.empty()) throw ConfigError(fmt::format("line {}: empty key", lineno));
    out[std::string(key)] = std::string(value);
  }
  return out;
}

KeyValues read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  return parse_key_values(in);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", key, text));
  }
  return value;
}

const std::vector<std::string>& system_config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : kFields) k.emplace_back(f.name);
    return k;
  }();
  return keys;
}

bool set_system_field(SystemConfig& cfg, std::string_view key, std::string_view value) {
  for (const auto& f : kFields) {
    if (key == f.name) {
      cfg.*f.member = parse_double(key, value);
      return true;
    }
  }
  return false;
}

double get_system_field(const SystemConfig& cfg, std::string_view key) {
  for (const auto& f : kFields) {
    if (key == f.name) return cfg.*f.member;
  }
  throw ConfigError(fmt::format("unknown config key '{}'", key));
}

}  // namespace mctx
