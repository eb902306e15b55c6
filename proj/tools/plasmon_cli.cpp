// Command-line front end: one subcommand per computation, CSV or JSON out.
#include <fstream>
#include <iostream>
#include <regex>

#include <CLI11.hpp>
#include <json.hpp>

#include "plasmon/config.hpp"

using plasmon::cli::RunConfig;
using plasmon::cli::Sweep;

namespace {

struct RawOptions {
  std::string eps_inf, omega_p, gamma_s, radius_sweep, ell, d_over_a, gamma_e, omega_e, omega0, kappa,
      window, format = "csv", config;
};

void add_common(CLI::App* sub, RunConfig& c, RawOptions& raw) {
  sub->add_option("--material", c.material, "preset name or eps_inf,omega_p,gamma_s")->capture_default_str();
  sub->add_option("--presets", c.presets_file, "JSON preset table");
  sub->add_option("--eps-inf", raw.eps_inf, "override eps_inf");
  sub->add_option("--omega-p", raw.omega_p, "override plasma energy (eV)");
  sub->add_option("--gamma-s", raw.gamma_s, "override damping (eV)");
  sub->add_option("--eps-out", c.eps_out, "background permittivity")->capture_default_str();
  sub->add_option("--radius", c.radius, "sphere radius (nm)")->capture_default_str();
  sub->add_option("--output,-o", c.output, "output path, - for stdout")->capture_default_str();
  sub->add_option("--format", raw.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--config", raw.config, "JSON run config (flags given on the command line win)");
}

void add_dimer(CLI::App* sub, RunConfig& c, RawOptions& raw) {
  sub->add_option("--d-over-a", raw.d_over_a, "centre distance over radius, value or lo:hi:count");
  sub->add_option("--orientation", c.orientation, "horizontal or vertical")->capture_default_str();
  sub->add_option("--quad-order", c.quad_order, "quadrature nodes per axis")->capture_default_str();
  sub->add_flag("--background-contrast", c.background_contrast, "weight by eps_1 - eps_out");
}

void add_chain(CLI::App* sub, RunConfig& c, RawOptions& raw) {
  add_dimer(sub, c, raw);
  sub->add_option("--n", c.n, "chain length")->capture_default_str();
  sub->add_option("--gamma-e", raw.gamma_e, "edge coupling (eV), value or lo:hi:count[log]");
  sub->add_option("--omega0", raw.omega0, "site energy override, e.g. 3.35+0.05i");
  sub->add_option("--kappa", raw.kappa, "coupling override, e.g. -0.25+0.003i");
}

// Applies the raw strings that were actually given.
void apply(const CLI::App* sub, const RawOptions& raw, RunConfig& c) {
  auto given = [&](const char* flag) {
    const auto* opt = sub->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--eps-inf")) c.eps_inf = Sweep::parse(raw.eps_inf);
  if (given("--omega-p")) c.omega_p = Sweep::parse(raw.omega_p);
  if (given("--gamma-s")) c.gamma_s = Sweep::parse(raw.gamma_s);
  if (given("--radius-sweep")) c.radius_sweep = Sweep::parse(raw.radius_sweep);
  if (given("--ell")) {
    static const std::regex range(R"(^\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*$)");
    std::smatch m;
    if (!std::regex_match(raw.ell, m, range)) throw plasmon::ContractViolation("--ell expects l or lo..hi");
    c.ell_lo = std::stoi(m[1].str());
    c.ell_hi = m[2].matched ? std::stoi(m[2].str()) : c.ell_lo;
  }
  if (given("--d-over-a")) c.d_over_a = Sweep::parse(raw.d_over_a);
  if (given("--gamma-e")) c.gamma_e = Sweep::parse(raw.gamma_e);
  if (given("--omega-e")) c.omega_e = Sweep::parse(raw.omega_e);
  if (given("--omega0")) c.omega0 = raw.omega0;
  if (given("--kappa")) c.kappa = raw.kappa;
  if (given("--window")) c.window = raw.window;
  if (given("--format")) c.format = raw.format == "json" ? plasmon::cli::Format::json : plasmon::cli::Format::csv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasinormal-mode plasmonics: spheres, dimers, chains"};
  app.require_subcommand(1);

  struct Entry {
    plasmon::cli::Command command;
    CLI::App* sub;
    RunConfig config;
    RawOptions raw;
  };
  std::vector<Entry> entries;
  entries.reserve(6);
  auto make = [&](plasmon::cli::Command cmd, const char* help) -> Entry& {
    entries.push_back(Entry{cmd, app.add_subcommand(plasmon::cli::to_string(cmd), help), RunConfig{}, {}});
    entries.back().config.command = cmd;
    return entries.back();
  };

  {
    auto& e = make(plasmon::cli::Command::single_sphere, "sphere QNM frequencies");
    add_common(e.sub, e.config, e.raw);
    e.sub->add_option("--radius-sweep", e.raw.radius_sweep, "radii lo:hi:count (nm)");
    e.sub->add_option("--ell", e.raw.ell, "multipole order l or range lo..hi");
  }
  {
    auto& e = make(plasmon::cli::Command::dimer, "coupled-mode dimer frequencies");
    add_common(e.sub, e.config, e.raw);
    add_dimer(e.sub, e.config, e.raw);
  }
  {
    auto& e = make(plasmon::cli::Command::dark_search, "dimer sweep over material parameters");
    add_common(e.sub, e.config, e.raw);
    add_dimer(e.sub, e.config, e.raw);
  }
  {
    auto& e = make(plasmon::cli::Command::chain_trajectory, "open-chain eigenvalues vs edge coupling");
    add_common(e.sub, e.config, e.raw);
    add_chain(e.sub, e.config, e.raw);
  }
  {
    auto& e = make(plasmon::cli::Command::chain_transmission, "end-to-end transmission of the chain");
    add_common(e.sub, e.config, e.raw);
    add_chain(e.sub, e.config, e.raw);
    e.sub->add_option("--omega-e", e.raw.omega_e, "probe energies lo:hi:count (eV)");
    e.sub->add_option("--prominence", e.config.prominence, "peak prominence relative to max T")
        ->capture_default_str();
  }
  {
    auto& e = make(plasmon::cli::Command::oracle_dimer, "full multipole collocation resonances");
    add_common(e.sub, e.config, e.raw);
    add_dimer(e.sub, e.config, e.raw);
    e.sub->add_option("--ell-max", e.config.ell_max, "multipole cutoff")->capture_default_str();
    e.sub->add_option("--points", e.config.points, "surface points per sphere, 0 = 2 x basis size");
    e.sub->add_option("--window", e.raw.window, "re_lo:re_hi:im_lo:im_hi (eV)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? plasmon::cli::kExitOk : plasmon::cli::kExitInvalid;
  }

  for (auto& e : entries) {
    if (!e.sub->parsed()) continue;
    try {
      RunConfig c = e.config;
      if (!e.raw.config.empty()) {
        std::ifstream in(e.raw.config);
        if (!in) throw plasmon::ContractViolation("cannot read config " + e.raw.config);
        c = plasmon::cli::from_json(nlohmann::json::parse(in));
        if (c.command != e.command) throw plasmon::ContractViolation("config is for a different command");
        // Scalar flags given on the command line override the file.
        const RunConfig& f = e.config;
        auto given = [&](const char* flag) {
          const auto* opt = e.sub->get_option_no_throw(flag);
          return opt != nullptr && opt->count() > 0;
        };
        if (given("--material")) c.material = f.material;
        if (given("--presets")) c.presets_file = f.presets_file;
        if (given("--eps-out")) c.eps_out = f.eps_out;
        if (given("--radius")) c.radius = f.radius;
        if (given("--output")) c.output = f.output;
        if (given("--orientation")) c.orientation = f.orientation;
        if (given("--quad-order")) c.quad_order = f.quad_order;
        if (given("--background-contrast")) c.background_contrast = f.background_contrast;
        if (given("--n")) c.n = f.n;
        if (given("--prominence")) c.prominence = f.prominence;
        if (given("--ell-max")) c.ell_max = f.ell_max;
        if (given("--points")) c.points = f.points;
      }
      apply(e.sub, e.raw, c);
      return plasmon::cli::run(c, std::cerr);
    } catch (const plasmon::ContractViolation& ex) {
      std::cerr << "error: " << ex.what() << "\n";
      return plasmon::cli::kExitInvalid;
    } catch (const nlohmann::json::exception& ex) {
      std::cerr << "error: malformed config: " << ex.what() << "\n";
      return plasmon::cli::kExitInvalid;
    }
  }
  return plasmon::cli::kExitInvalid;
}
