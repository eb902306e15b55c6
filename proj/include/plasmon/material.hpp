#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plasmon/types.hpp"

namespace plasmon::material {

inline constexpr double kHbarC = 197.3269804;  // eV nm
inline constexpr double kEvToTHz = 241.799;

/// Drude-Sommerfeld metal: eps(w) = eps_inf - wp^2 / (w^2 - i w gamma_s).
struct DrudeMaterial {
  double eps_inf = 1.0;
  double omega_p = 1.0;  ///< eV
  double gamma_s = 0.0;  ///< eV

  /// gamma_s > 0.1 omega_p; allowed, but flagged.
  bool high_damping() const { return gamma_s > 0.1 * omega_p; }
  bool operator==(const DrudeMaterial&) const = default;
};

struct Background {
  double eps_out = 1.0;
  bool operator==(const Background&) const = default;
};

/// Violations of the parameter ranges (empty when valid) plus warnings prefixed "warning:".
std::vector<std::string> check(const DrudeMaterial& mat);
std::vector<std::string> check(const Background& bg);

cplx eps_in(const DrudeMaterial& mat, cplx omega);

/// sigma = (1/2w) d(w^2 eps)/dw in closed form.
cplx sigma(const DrudeMaterial& mat, cplx omega);
inline cplx sigma(const Background& bg, cplx /*omega*/) { return bg.eps_out; }

/// (w / hbar c) sqrt(eps) with the principal root; on the negative real axis Im sqrt >= 0.
cplx wavenumber(cplx eps, cplx omega);

struct Wavenumbers {
  cplx k_in;
  cplx k_out;
};
Wavenumbers wavenumbers(const DrudeMaterial& mat, const Background& bg, cplx omega);

/// Full width 2 Im(w) for the stored e^{+i w t} convention.
inline double width(cplx omega) { return 2.0 * omega.imag(); }

/// Size-independent nonradiative part of the half-width.
inline double nonradiative_half_width(const DrudeMaterial& mat) { return 0.5 * mat.gamma_s; }

using PresetTable = std::map<std::string, DrudeMaterial>;

/// silver = (5, 8.9, 0.1), darkmode = (1, 10.918, 0).
PresetTable builtin_presets();

/// Reads {"name": {"eps_inf":..., "omega_p_eV":..., "gamma_s_eV":...}, ...}.
/// Throws ContractViolation on malformed input.
PresetTable load_presets(const std::string& path);

std::optional<DrudeMaterial> find_preset(const PresetTable& table, const std::string& name);

}  // namespace plasmon::material
