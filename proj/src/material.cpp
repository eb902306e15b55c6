#include "plasmon/material.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace plasmon::material {

std::vector<std::string> check(const DrudeMaterial& mat) {
  std::vector<std::string> out;
  if (!std::isfinite(mat.eps_inf) || mat.eps_inf < 1.0) out.push_back("eps_inf must be >= 1");
  if (!std::isfinite(mat.omega_p) || !(mat.omega_p > 0.0)) out.push_back("omega_p must be > 0 eV");
  if (!std::isfinite(mat.gamma_s) || mat.gamma_s < 0.0) out.push_back("gamma_s must be >= 0 eV");
  if (out.empty() && mat.high_damping()) out.push_back("warning: gamma_s exceeds 0.1 omega_p");
  return out;
}

std::vector<std::string> check(const Background& bg) {
  std::vector<std::string> out;
  if (!std::isfinite(bg.eps_out) || !(bg.eps_out > 0.0)) {
    out.push_back("eps_out must be > 0");
  } else if (bg.eps_out < 1.0) {
    out.push_back("warning: eps_out below 1 is unphysical for a dielectric");
  }
  return out;
}

cplx eps_in(const DrudeMaterial& mat, cplx omega) {
  const cplx den = omega * (omega - kI * mat.gamma_s);
  if (den == 0.0) throw SingularityError("eps_in: w^2 - i w gamma_s vanishes");
  return mat.eps_inf - mat.omega_p * mat.omega_p / den;
}

cplx sigma(const DrudeMaterial& mat, cplx omega) {
  const cplx shifted = omega - kI * mat.gamma_s;
  if (omega == 0.0 || shifted == 0.0) throw SingularityError("sigma: w^2 - i w gamma_s vanishes");
  return mat.eps_inf + kI * mat.gamma_s * mat.omega_p * mat.omega_p / (2.0 * omega * shifted * shifted);
}

cplx wavenumber(cplx eps, cplx omega) {
  if (eps.imag() == 0.0) eps = cplx(eps.real(), 0.0);  // drop a negative zero
  return omega / kHbarC * std::sqrt(eps);
}

Wavenumbers wavenumbers(const DrudeMaterial& mat, const Background& bg, cplx omega) {
  if (omega == 0.0) throw SingularityError("wavenumbers: w = 0");
  return Wavenumbers{wavenumber(eps_in(mat, omega), omega), wavenumber(bg.eps_out, omega)};
}

PresetTable builtin_presets() {
  return PresetTable{{"silver", DrudeMaterial{5.0, 8.9, 0.1}},
                     {"darkmode", DrudeMaterial{1.0, 10.918, 0.0}}};
}

PresetTable load_presets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot open material file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ContractViolation("malformed material file " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw ContractViolation("material file must hold a JSON object");
  PresetTable table;
  for (const auto& [name, entry] : doc.items()) {
    try {
      table[name] = DrudeMaterial{entry.at("eps_inf").get<double>(),
                                  entry.at("omega_p_eV").get<double>(),
                                  entry.at("gamma_s_eV").get<double>()};
    } catch (const nlohmann::json::exception& e) {
      throw ContractViolation("material '" + name + "': " + e.what());
    }
  }
  return table;
}

std::optional<DrudeMaterial> find_preset(const PresetTable& table, const std::string& name) {
  const auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

}  // namespace plasmon::material
