#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mctx {

inline constexpr double kAvogadro = 6.022e23;  // 1/mol
inline constexpr double kPi = 3.14159265358979323846;

/// Thrown for any configuration or argument that violates a model invariant.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Physical setup shared by every model. SI units throughout; the defaults
/// are the reference parameter set (80 nm nanoparticle in a 1 mm reservoir).
struct SystemConfig {
  double D = 2.6e-12;      // diffusion coefficient [m^2/s]
  double r_in = 80e-9;     // nanoparticle radius [m]
  double r_out = 1e-3;     // environment radius [m]
  double r_RX = 1e-6;      // receiver radius [m]
  double d = 2e-6;         // TX-RX centre distance [m]
  double N_out_A = 1e16;   // type-A molecules in the environment
  double rho_max = 2.7e-2; // open-membrane permeability [1/s]
  double T = 1e-4;         // time step [s]
  double N_a = kAvogadro;  // fixed; not settable from config files

  bool operator==(const SystemConfig&) const = default;
};

/// Throws ConfigError if any invariant fails. r_out must be at least
/// 100 r_in so the environment acts as an infinite reservoir.
void validate(const SystemConfig& cfg);

struct DerivedConstants {
  double V_in = 0;         // [m^3]
  double V_out = 0;        // [m^3]
  double A = 0;            // membrane area [m^2]
  double C_out0_A = 0;     // background concentration [mol/m^3]
  double N_max = 0;        // molecules in V_in at background concentration
  double rho_hat_max = 0;  // permeability in velocity units [m/s]
};

DerivedConstants derive_constants(const SystemConfig& cfg);

inline double sphere_volume(double r) { return 4.0 / 3.0 * kPi * r * r * r; }

/// rho [1/s] -> rho_hat [m/s] for a sphere: rho_hat = rho V / A = rho r / 3.
inline double rho_hat_from_rho(double rho, double r_in) { return rho * r_in / 3.0; }

// ---------------------------------------------------------------------------
// Flat key/value files
//
//   # comment
//   key = value
//
// Keys are case sensitive. Blank lines and text after '#' are ignored.
// Duplicate keys: last one wins.

using KeyValues = std::map<std::string, std::string, std::less<>>;

KeyValues parse_key_values(std::istream& in);
KeyValues read_key_value_file(const std::string& path);

/// Parses a floating point value, rejecting trailing garbage.
double parse_double(std::string_view key, std::string_view text);

/// Names of the SystemConfig fields settable from a key/value source.
const std::vector<std::string>& system_config_keys();

/// Sets one SystemConfig field by name. Returns false for unknown keys.
bool set_system_field(SystemConfig& cfg, std::string_view key, std::string_view value);

/// Reads one SystemConfig field by name; throws ConfigError for unknown keys.
double get_system_field(const SystemConfig& cfg, std::string_view key);

}  // namespace mctx
