#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "plasmon/material.hpp"
#include "plasmon/types.hpp"

namespace plasmon::cli {

enum class Command { single_sphere, dimer, dark_search, chain_trajectory, chain_transmission, oracle_dimer };
enum class Format { csv, json };

std::string to_string(Command c);
std::optional<Command> parse_command(const std::string& s);

/// `lo:hi:count` (linear), `lo:hi:countlog` (logarithmic) or a single value.
struct Sweep {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
  bool log = false;

  static Sweep single(double v) { return Sweep{v, v, 1, false}; }
  /// Throws ContractViolation on malformed text.
  static Sweep parse(const std::string& text);
  std::vector<double> values() const;
  std::string str() const;
  /// Empty when valid.
  std::vector<std::string> check(const std::string& name) const;
  bool operator==(const Sweep&) const = default;
};

/// Parses "a+bi", "a-bi", "a" (eV).
cplx parse_complex(const std::string& text);

struct RunConfig {
  Command command = Command::single_sphere;
  std::string material = "silver";  ///< preset name or "eps_inf,omega_p,gamma_s"
  std::string presets_file;          ///< empty: built-in presets
  std::optional<Sweep> eps_inf;      ///< overrides; sweeps only for dark-search
  std::optional<Sweep> omega_p;
  std::optional<Sweep> gamma_s;
  double eps_out = 1.0;

  double radius = 10.0;
  std::optional<Sweep> radius_sweep;
  int ell_lo = 1;
  int ell_hi = 1;

  Sweep d_over_a = Sweep::single(2.0);
  std::string orientation = "horizontal";
  int quad_order = 24;
  bool background_contrast = false;

  int n = 5;
  Sweep gamma_e = Sweep{0.01, 10.0, 60, true};
  Sweep omega_e = Sweep{2.8, 3.9, 2000, false};
  std::optional<std::string> omega0;  ///< chain override, complex text
  std::optional<std::string> kappa;   ///< chain override, complex text
  double prominence = 0.05;

  int ell_max = 4;
  int points = 0;
  std::optional<std::string> window;  ///< oracle "re_lo:re_hi:im_lo:im_hi"

  std::string output = "-";
  Format format = Format::csv;

  bool operator==(const RunConfig&) const = default;
};

nlohmann::json to_json(const RunConfig& c);
/// Throws ContractViolation on malformed input.
RunConfig from_json(const nlohmann::json& j);

/// Every violation found, not just the first. Empty means run() will not fail on input.
std::vector<std::string> validate(const RunConfig& c);

/// All materials named by the config (cartesian product of override sweeps).
std::vector<material::DrudeMaterial> resolve_materials(const RunConfig& c);

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitUnconverged = 3;

/// Executes the command and writes the output file (or stdout for "-").
/// Diagnostics go to `log`.
int run(const RunConfig& c, std::ostream& log);

/// Same, writing the table to `out` instead of the configured path.
int run_to_stream(const RunConfig& c, std::ostream& out, std::ostream& log);

}  // namespace plasmon::cli
